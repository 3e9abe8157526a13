"""
Machine checks of the caliber inequalities.

Every logarithm in the bounds is replaced by an exact comparison of prime
powers against D, so verdicts are reproducible bit for bit.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import AbstractSet, Callable, Optional, Tuple

from sympy import isprime, primerange

from caliber_cli.engine.arith import DomainError, field_spec, isqrt, kronecker_chi
from caliber_cli.engine.forms import caliber
from caliber_cli.engine.ideals import rho

# d with κ(d) = 1 as listed in the caliber-one classification
CALIBER_ONE_SET = frozenset({2, 13, 29, 53, 173, 293})


class Verdict(str, Enum):
    """Outcome of a single check."""
    PASS = "pass"
    VACUOUS = "vacuous"
    FAIL = "fail"
    ANOMALY = "anomaly"


@dataclass(frozen=True)
class SplitPrimeBound:
    """
    The splitting-prime bound for one split prime p.

    Attributes:
        p: The split prime.
        exponent: Largest e with 4·p^(2e) < D.
        bound: 2·exponent; the caliber must exceed it.
        verdict: PASS when κ > bound.
    """
    p: int
    exponent: int
    bound: int
    verdict: Verdict


@dataclass(frozen=True)
class BoundReport:
    """
    Sandwich sums and splitting-prime bounds of one field.

    Attributes:
        d: Square-free d.
        D: Fundamental discriminant.
        lower_sum: Σ ρ_D(A) over 4A² < D.
        upper_sum: Σ ρ_D(A) over A² < D.
        kappa: Caliber number.
        verdict: PASS when lower_sum <= kappa <= upper_sum.
        split_bounds: One entry per split prime below the cutoff.
    """
    d: int
    D: int
    lower_sum: int
    upper_sum: int
    kappa: int
    verdict: Verdict
    split_bounds: Tuple[SplitPrimeBound, ...] = field(default=())

    @property
    def split_verdict(self) -> Verdict:
        if not self.split_bounds:
            return Verdict.VACUOUS
        if all(entry.verdict == Verdict.PASS for entry in self.split_bounds):
            return Verdict.PASS
        return Verdict.FAIL


def sandwich(d: int, kappa: Optional[int] = None, rho_fn: Callable[[int, int], int] = rho) -> BoundReport:
    """
    Compare κ(d) with the two ρ sums.

    Args:
        d: Square-free d >= 2.
        kappa: κ(d) if already known.
        rho_fn: How ρ_D(A) is evaluated; the direct scan by default.

    Example:
        >>> report = sandwich(13)
        >>> report.lower_sum, report.kappa, report.upper_sum
        (1, 1, 3)
    """
    D = field_spec(d).D
    if kappa is None:
        kappa = caliber(d)
    lower_sum = 0
    upper_sum = 0
    a = 1
    while a * a < D:
        value = rho_fn(a, D)
        upper_sum += value
        if 4 * a * a < D:
            lower_sum += value
        a += 1
    verdict = Verdict.PASS if lower_sum <= kappa <= upper_sum else Verdict.FAIL
    return BoundReport(d, D, lower_sum, upper_sum, kappa, verdict)


def split_exponent(D: int, p: int) -> int:
    """Largest e >= 0 with 4·p^(2e) < D, i.e. the floor of log(√D/2)/log p."""
    e = 0
    power = p * p
    while 4 * power < D:
        e += 1
        power *= p * p
    return e


def split_lower_bound(d: int, p: int) -> int:
    """
    The bound 2·e that κ(d) must strictly exceed for a split prime p.

    Raises:
        DomainError: If p does not split in Q(√d).

    Example:
        >>> split_lower_bound(401, 2)
        6
    """
    D = field_spec(d).D
    if not isprime(p) or kronecker_chi(D, p) != 1:
        raise DomainError(f"p = {p} does not split in Q(√{d})")
    return 2 * split_exponent(D, p)


def check_split_bounds(d: int, kappa: Optional[int] = None, cutoff: int = 100) -> Tuple[SplitPrimeBound, ...]:
    """Evaluate the splitting-prime bound for every split prime p < cutoff."""
    D = field_spec(d).D
    if kappa is None:
        kappa = caliber(d)
    entries = []
    for p in primerange(2, cutoff):
        p = int(p)
        if kronecker_chi(D, p) != 1:
            continue
        exponent = split_exponent(D, p)
        bound = 2 * exponent
        verdict = Verdict.PASS if kappa > bound else Verdict.FAIL
        entries.append(SplitPrimeBound(p, exponent, bound, verdict))
    return tuple(entries)


def bound_report(
        d: int,
        kappa: Optional[int] = None,
        cutoff: int = 100,
        rho_fn: Callable[[int, int], int] = rho,
) -> BoundReport:
    """Sandwich report with the splitting-prime bounds filled in."""
    report = sandwich(d, kappa, rho_fn)
    return BoundReport(
        report.d, report.D, report.lower_sum, report.upper_sum, report.kappa, report.verdict,
        check_split_bounds(d, report.kappa, cutoff),
    )


def check_pow2_corollary(d: int, kappa: Optional[int] = None) -> Verdict:
    """
    Check 2^(κ(d)+4) > d for square-free d ≡ 1 mod 8.

    Raises:
        DomainError: If d is not 1 mod 8.
    """
    if d % 8 != 1:
        raise DomainError(f"power-of-two bound needs d ≡ 1 mod 8, got d = {d}")
    field_spec(d)
    if kappa is None:
        kappa = caliber(d)
    exponent = kappa + 4
    if exponent >= d.bit_length():
        return Verdict.PASS
    return Verdict.PASS if (1 << exponent) > d else Verdict.FAIL


def split_prime_below_sqrtD(d: int, exclusion: AbstractSet[int] = CALIBER_ONE_SET) -> Optional[int]:
    """
    The smallest split prime p with p² <= D, for prime d outside the exclusion set.

    Returns:
        The prime, or None; absence contradicts the corollary and is reported
        by callers as an anomaly.

    Raises:
        DomainError: If d is composite or excluded.
    """
    if d in exclusion:
        raise DomainError(f"d = {d} is in the exclusion set")
    if not isprime(d):
        raise DomainError(f"d = {d} is not prime")
    D = field_spec(d).D
    for p in primerange(2, isqrt(D) + 1):
        if kronecker_chi(D, int(p)) == 1:
            return int(p)
    return None


def check_split_prime_corollary(d: int) -> Verdict:
    """VACUOUS outside the hypothesis, ANOMALY when no split prime p <= √D exists."""
    if d in CALIBER_ONE_SET or not isprime(d):
        return Verdict.VACUOUS
    return Verdict.PASS if split_prime_below_sqrtD(d) is not None else Verdict.ANOMALY
