"""
The counting function ρ_D and primitive ideals.

ρ_D(A) is the number of residues B mod 2A with B² ≡ D mod 4A, equivalently
the number of primitive ideals [A, (B+√D)/2] of norm A. It is computed two
independent ways (direct residue scan and the multiplicative formula) so
that each validates the other.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from caliber_cli.engine.arith import (
    DomainError,
    OmegaParity,
    factorize,
    field_from_discriminant,
    isqrt,
    kronecker_chi,
)
from caliber_cli.engine.contfrac import expand, make_qi
from caliber_cli.engine.forms import CycleDecomposition, QuadForm, cycle_decomposition, form_from_root

# Largest norm the residue scan accepts; the scan holds 2A int64 values and B*B < 4A² stays in int64
MAX_NORM_A = 10**7


@dataclass(frozen=True)
class ResidueSolutionSet:
    """
    S_D(A): the sorted residues B in [0, 2A) with B² ≡ D mod 4A.
    """
    a: int
    d_disc: int
    residues: Tuple[int, ...]

    @property
    def rho(self) -> int:
        return len(self.residues)


@dataclass(frozen=True)
class PrimitiveIdeal:
    """
    The primitive ideal [a, (b + √D)/2] with b² ≡ D mod 4a and 0 <= b < 2a.
    """
    a: int
    b: int
    d_disc: int

    @property
    def norm(self) -> int:
        return self.a

    def to_form(self) -> QuadForm:
        """The form [a, b, (b² - D)/(4a)] attached to the ideal."""
        return QuadForm(self.a, self.b, (self.b * self.b - self.d_disc) // (4 * self.a))

    def __str__(self) -> str:
        return f"[{self.a}, ({self.b}+√{self.d_disc})/2]"


def _require_positive(a: int) -> None:
    if a < 1:
        raise DomainError(f"A must be a positive integer, got {a}")


def solve_sd(a: int, D: int) -> ResidueSolutionSet:
    """
    Enumerate S_D(A) by scanning B over [0, 2A).

    Raises:
        DomainError: If A < 1 or A exceeds MAX_NORM_A.

    Example:
        >>> solve_sd(2, 17).residues
        (1, 3)
    """
    _require_positive(a)
    if a > MAX_NORM_A:
        raise DomainError(f"A = {a} exceeds the residue scan limit {MAX_NORM_A}")
    candidates = np.arange(2 * a, dtype=np.int64)
    # B*B - D is reduced mod 4A before it can leave int64
    hits = ((candidates * candidates) % (4 * a) - D % (4 * a)) % (4 * a) == 0
    return ResidueSolutionSet(a, D, tuple(int(b) for b in candidates[hits]))


def rho(a: int, D: int) -> int:
    """ρ_D(A) by direct scan."""
    return solve_sd(a, D).rho


def rho_by_formula(a: int, D: int) -> int:
    """
    ρ_D(A) as the product of its prime-power values.

    For p^α exactly dividing A: 1 + χ_D(p) when p ∤ D, 1 when p | D and
    α = 1, 0 when p | D and α > 1.

    Example:
        >>> rho_by_formula(3, 13)
        2
    """
    _require_positive(a)
    result = 1
    for p, alpha in factorize(a).items():
        if D % p == 0:
            local = 1 if alpha == 1 else 0
        else:
            local = 1 + kronecker_chi(D, p)
        if local == 0:
            return 0
        result *= local
    return result


def primitive_ideals_with_norm(a: int, D: int) -> List[PrimitiveIdeal]:
    """One primitive ideal per residue of S_D(A)."""
    return [PrimitiveIdeal(a, b, D) for b in solve_sd(a, D).residues]


def _norm_of(b: int, c: int, D: int, parity: OmegaParity) -> int:
    """N(b + cω_D) for the field of discriminant D."""
    if parity == OmegaParity.HALF_ROOT:
        return b * b - c * c * D // 4
    return ((2 * b + c) ** 2 - c * c * D) // 4


def canonicalize_ideal(a: int, b: int, c: int, D: int) -> Tuple[int, PrimitiveIdeal]:
    """
    Write the integral ideal [a, b + cω_D] as f times a primitive ideal.

    Args:
        a: Positive integer.
        b: Non-negative integer.
        c: Positive integer.
        D: Fundamental discriminant.

    Returns:
        The pair (f, prim) with f = c and f·prim equal to the input module.

    Raises:
        DomainError: If c ∤ b, c ∤ a or ac ∤ N(b + cω_D).

    Example:
        >>> f, prim = canonicalize_ideal(2, 1, 1, 17)
        >>> f, str(prim)
        (1, '[2, (3+√17)/2]')
    """
    spec = field_from_discriminant(D)
    if a < 1 or c < 1 or b < 0:
        raise DomainError(f"ideal [{a}, {b} + {c}ω] needs a, c positive and b non-negative")
    if b % c != 0 or a % c != 0 or _norm_of(b, c, D, spec.omega_parity) % (a * c) != 0:
        raise DomainError(f"[{a}, {b} + {c}ω] violates c | b, c | a, ac | N(b + cω) for D = {D}")
    norm = a // c
    residue = (2 * (b // c) + int(spec.omega_parity)) % (2 * norm)
    prim = PrimitiveIdeal(norm, residue, D)
    if (residue * residue - D) % (4 * norm) != 0:
        raise DomainError(f"[{a}, {b} + {c}ω] does not reduce to a primitive ideal for D = {D}")
    return c, prim


def module_basis(a: int, b: int, c: int) -> Tuple[int, int, int]:
    """
    Hermite normal form of the Z-module [a, b + cω] in the basis (1, ω).

    Returns:
        (a, b mod a, c) with a, c positive.
    """
    return abs(a), b % abs(a), abs(c)


def scaled_module(f: int, prim: PrimitiveIdeal) -> Tuple[int, int, int]:
    """The module f·[A, (B+√D)/2] in (1, ω) coordinates, as (fA, f(B - shift)/2, f)."""
    shift = int(field_from_discriminant(prim.d_disc).omega_parity)
    return module_basis(f * prim.a, f * (prim.b - shift) // 2, f)


def module_equals(first: Tuple[int, int, int], second: Tuple[int, int, int]) -> bool:
    """Compare two modules [a, b + cω] given as (a, b, c) triples."""
    return module_basis(*first) == module_basis(*second)


def ideal_count(n: int, D: int) -> int:
    """
    r_K(n), the number of integral ideals of norm n, from splitting types.

    Split p contributes α + 1, inert p contributes 1 for even α and 0 for
    odd α, ramified p contributes 1.

    Example:
        >>> ideal_count(9, 13)
        3
    """
    _require_positive(n)
    result = 1
    for p, alpha in factorize(n).items():
        chi = kronecker_chi(D, p)
        if chi == 1:
            result *= alpha + 1
        elif chi == -1 and alpha % 2 == 1:
            return 0
    return result


def convolution_count(n: int, D: int) -> int:
    """Σ_{f² | n} ρ_D(n / f²), which equals r_K(n)."""
    _require_positive(n)
    total = 0
    for f in range(1, isqrt(n) + 1):
        if n % (f * f) == 0:
            total += rho(n // (f * f), D)
    return total


def ideal_class_index(ideal: PrimitiveIdeal, decomposition: Optional[CycleDecomposition] = None) -> int:
    """
    The index of the neighbor-orbit holding the class of a primitive ideal.

    The ideal [A, (B+√D)/2] is homothetic to the lattice [1, β] with
    β = (B+√D)/(2A); expanding β reaches a reduced number whose form lies in
    the ideal's class. Index 0 is the principal class.
    """
    if decomposition is None:
        decomposition = cycle_decomposition(ideal.d_disc)
    beta = make_qi(ideal.b, 2 * ideal.a, ideal.d_disc)
    reduced = form_from_root(expand(beta).periodic_states[0])
    return decomposition.index_of(reduced)


def is_principal(ideal: PrimitiveIdeal, decomposition: Optional[CycleDecomposition] = None) -> bool:
    """Check whether a primitive ideal is principal."""
    return ideal_class_index(ideal, decomposition) == 0
