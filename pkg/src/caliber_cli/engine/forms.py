"""
Binary quadratic forms of positive discriminant.

A form [A, B, C] is reduced when A > 0, B < 0, C < 0, B² < D and
√D - |B| < 2A < √D + |B|. The reduced forms of a fundamental discriminant
are permuted by the neighbor map (one continued-fraction step on the first
root); its orbits are the classes and their sizes the per-class calibers.
"""

import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from caliber_cli.engine.arith import (
    DomainError,
    divisors,
    field_from_discriminant,
    field_spec,
    gt_sqrt,
    isqrt,
    lt_sqrt,
)
from caliber_cli.engine.contfrac import (
    QuadraticIrrational,
    cf_step,
    expand,
    is_reduced_qi,
    make_qi,
    omega,
)


class InvariantViolation(RuntimeError):
    """Raised when a structural invariant of the reduction theory fails."""
    pass


@dataclass(frozen=True, order=True)
class QuadForm:
    """
    The binary quadratic form A X² + B XY + C Y².

    Ordering is lexicographic on (a, b, c), which is the (A, B) order used
    for deterministic enumeration.
    """
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_primitive(self) -> bool:
        return math.gcd(self.a, self.b, self.c) == 1

    def as_list(self) -> List[int]:
        return [self.a, self.b, self.c]

    def __str__(self) -> str:
        return f"[{self.a},{self.b},{self.c}]"


@dataclass(frozen=True)
class CycleDecomposition:
    """
    The reduced forms of D partitioned into neighbor-orbits.

    Attributes:
        discriminant: The fundamental discriminant D.
        cycles: Cyclically ordered orbits; cycles[0] is the principal cycle,
            starting at the principal seed.
    """
    discriminant: int
    cycles: Tuple[Tuple[QuadForm, ...], ...]

    @property
    def class_number(self) -> int:
        return len(self.cycles)

    @property
    def caliber(self) -> int:
        return sum(len(cycle) for cycle in self.cycles)

    @property
    def cycle_sizes(self) -> Tuple[int, ...]:
        return tuple(sorted(len(cycle) for cycle in self.cycles))

    @property
    def principal_cycle(self) -> Tuple[QuadForm, ...]:
        return self.cycles[0]

    def index_of(self, form: QuadForm) -> int:
        """Return the index of the cycle containing a reduced form."""
        for index, cycle in enumerate(self.cycles):
            if form in cycle:
                return index
        raise DomainError(f"{form} is not a reduced form of discriminant {self.discriminant}")


def _check_discriminant(f: QuadForm, D: int) -> None:
    if f.discriminant != D:
        raise DomainError(f"form {f} has discriminant {f.discriminant}, expected {D}")


def is_reduced(f: QuadForm, D: int) -> bool:
    """
    Test the reduced condition with exact integer comparisons.

    Raises:
        DomainError: If the form's discriminant is not D.

    Example:
        >>> is_reduced(QuadForm(1, -3, -1), 13)
        True
    """
    _check_discriminant(f, D)
    if not (f.a > 0 and f.b < 0 and f.c < 0 and f.b * f.b < D):
        return False
    abs_b = -f.b
    # √D - |B| < 2A  and  2A < √D + |B|
    return gt_sqrt(2 * f.a + abs_b, D) and lt_sqrt(2 * f.a - abs_b, D)


def iter_reduced(D: int) -> Iterator[QuadForm]:
    """
    Yield the reduced forms of D, grouped by B from -isqrt(D) towards -1.

    For a fixed B the reduced A are the divisors of N = (D - B²)/4 with
    A > (√D - |B|)/2 and N/A > (√D - |B|)/2; the upper bound on 2A then holds
    automatically because the two bounds multiply to N. Forms of a
    fundamental discriminant are always primitive.
    """
    s = isqrt(D)
    parity = D % 2
    start = s if s % 2 == parity else s - 1
    for abs_b in range(start, 0, -2):
        n = (D - abs_b * abs_b) // 4
        for a in divisors(n):
            c = n // a
            if gt_sqrt(2 * a + abs_b, D) and gt_sqrt(2 * c + abs_b, D):
                yield QuadForm(a, -abs_b, -c)


def enumerate_reduced(D: int) -> List[QuadForm]:
    """
    All reduced forms of the fundamental discriminant D, sorted by (A, B).

    Raises:
        DomainError: If D is not fundamental.

    Example:
        >>> [str(f) for f in enumerate_reduced(12)]
        ['[1,-2,-2]', '[2,-2,-1]']
    """
    field_from_discriminant(D)
    return sorted(iter_reduced(D))


def count_reduced(D: int, stop_after: Optional[int] = None) -> int:
    """
    Count the reduced forms of D.

    Args:
        D: A fundamental discriminant.
        stop_after: When given, stop as soon as the count exceeds it; the
            return value is then stop_after + 1.
    """
    count = 0
    for _ in iter_reduced(D):
        count += 1
        if stop_after is not None and count > stop_after:
            break
    return count


def caliber(d: int) -> int:
    """
    The caliber number κ(d), the number of reduced forms of D.

    Example:
        >>> caliber(17)
        3
    """
    return count_reduced(field_spec(d).D)


def lift_to_reduced(a: int, b0: int, D: int) -> QuadForm:
    """
    Lift a residue class [b0] mod 2A with b0² ≡ D mod 4A to its reduced form.

    The unique B ≡ b0 mod 2A with -√D < B < 2A - √D is the smallest
    representative not below -isqrt(D); C = (B² - D)/(4A).

    Raises:
        DomainError: If 4A² >= D or b0² is not D mod 4A.
        InvariantViolation: If the lifted form is not reduced.
    """
    if a < 1 or 4 * a * a >= D:
        raise DomainError(f"lift needs 0 < A < √D/2, got A = {a} for D = {D}")
    if (b0 * b0 - D) % (4 * a) != 0:
        raise DomainError(f"{b0}² is not congruent to {D} mod {4 * a}")
    s = isqrt(D)
    b = -s + (b0 + s) % (2 * a)
    form = QuadForm(a, b, (b * b - D) // (4 * a))
    if not is_reduced(form, D):
        raise InvariantViolation(f"lift of A = {a}, b0 = {b0} gave non-reduced {form} for D = {D}")
    return form


def _require_reduced(f: QuadForm, D: int) -> None:
    if not is_reduced(f, D):
        raise DomainError(f"form {f} is not reduced for D = {D}")


def root_of(f: QuadForm) -> QuadraticIrrational:
    """The root (-B + √D)/(2A) of f(X, 1), for any form of non-square discriminant."""
    return make_qi(-f.b, 2 * f.a, f.discriminant)


def first_root(f: QuadForm, D: int) -> QuadraticIrrational:
    """
    The reduced root w = (-B + √D)/(2A) of a reduced form.

    Raises:
        DomainError: If f is not reduced for D.
    """
    _require_reduced(f, D)
    return root_of(f)


def form_from_root(x: QuadraticIrrational) -> QuadForm:
    """
    Invert root_of: the form [Q/2, -P, (P² - D)/(2Q)] with first root x.

    Raises:
        DomainError: If x is not the root of an integral form.
    """
    if x.q % 2 != 0 or (x.p * x.p - x.radicand) % (2 * x.q) != 0:
        raise DomainError(f"{x} is not the root of an integral form")
    return QuadForm(x.q // 2, -x.p, (x.p * x.p - x.radicand) // (2 * x.q))


def neighbor(f: QuadForm, D: int) -> QuadForm:
    """
    The reduced form whose first root is 1/(w - ⌊w⌋) for w the first root of f.

    Raises:
        DomainError: If f is not reduced for D.
        InvariantViolation: If the neighbor is not reduced.

    Example:
        >>> str(neighbor(QuadForm(1, -2, -2), 12))
        '[2,-2,-1]'
    """
    _, nxt = cf_step(first_root(f, D))
    result = form_from_root(nxt)
    if not is_reduced(result, D):
        raise InvariantViolation(f"neighbor of {f} is {result}, which is not reduced for D = {D}")
    return result


def principal_form(D: int) -> QuadForm:
    """The form whose first root is ω_D: [1, 0, -D/4] or [1, -1, (1-D)/4]."""
    return form_from_root(omega(field_from_discriminant(D)))


def reduce_form(f: QuadForm, D: int) -> QuadForm:
    """
    The first reduced form reached from f by expanding its root.

    The result lies in f's neighbor-orbit class.
    """
    _check_discriminant(f, D)
    expansion = expand(root_of(f))
    return form_from_root(expansion.periodic_states[0])


def principal_seed(D: int) -> QuadForm:
    """The first reduced form in the expansion of ω_D."""
    return reduce_form(principal_form(D), D)


def cycle_decomposition(D: int, forms: Optional[Sequence[QuadForm]] = None) -> CycleDecomposition:
    """
    Partition the reduced forms of D into neighbor-orbits.

    The principal cycle comes first and starts at the principal seed; the
    other cycles follow in the order of their smallest form.

    Args:
        D: A fundamental discriminant.
        forms: The reduced forms of D, if already enumerated.

    Raises:
        InvariantViolation: If the neighbor map leaves the reduced set or
            is not injective on it.
    """
    reduced = list(forms) if forms is not None else enumerate_reduced(D)
    owner: Dict[QuadForm, int] = {f: -1 for f in reduced}
    seeds = [principal_seed(D)] + sorted(reduced)
    cycles: List[Tuple[QuadForm, ...]] = []
    for seed in seeds:
        if seed not in owner:
            raise InvariantViolation(f"principal seed {seed} is not a reduced form of D = {D}")
        if owner[seed] != -1:
            continue
        index = len(cycles)
        cycle = [seed]
        owner[seed] = index
        current = neighbor(seed, D)
        while current != seed:
            if current not in owner:
                raise InvariantViolation(f"neighbor left the reduced set at {current} for D = {D}")
            if owner[current] != -1:
                raise InvariantViolation(f"neighbor is not injective at {current} for D = {D}")
            owner[current] = index
            cycle.append(current)
            current = neighbor(current, D)
        cycles.append(tuple(cycle))
    return CycleDecomposition(D, tuple(cycles))


def is_reduced_root(f: QuadForm, D: int) -> bool:
    """Check that the first root of a reduced form is a reduced irrationality."""
    return is_reduced_qi(first_root(f, D))
