"""
Continued fractions of quadratic irrationalities.

A quadratic irrationality is stored exactly as (P + √D) / Q with Q dividing
D - P². Expansion steps keep that shape, so period detection works on the
(P, Q) states and never needs floating point.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from caliber_cli.engine.arith import DomainError, FieldSpec, is_square, isqrt, square_part


@dataclass(frozen=True)
class QuadraticIrrational:
    """
    The real number (p + √radicand) / q in canonical form.

    Attributes:
        p: Rational part numerator.
        q: Nonzero denominator; q divides radicand - p².
        radicand: Positive non-square integer.
    """
    p: int
    q: int
    radicand: int

    def __str__(self) -> str:
        return f"({self.p}+√{self.radicand})/{self.q}"


@dataclass(frozen=True)
class CFExpansion:
    """
    Continued fraction [preperiod; period, period, ...] of an irrationality.

    Attributes:
        preperiod: Digits before the periodic part (first may be any integer).
        period: Minimal repeating block of positive digits.
        periodic_states: The complete quotients at the start of each periodic digit.
    """
    preperiod: Tuple[int, ...]
    period: Tuple[int, ...]
    periodic_states: Tuple[QuadraticIrrational, ...]

    @property
    def is_purely_periodic(self) -> bool:
        return not self.preperiod


def make_qi(p: int, q: int, radicand: int) -> QuadraticIrrational:
    """
    Build the canonical representative of (p + √radicand) / q.

    When q does not divide radicand - p², numerator and denominator are
    multiplied by |q| (p ← p|q|, radicand ← radicand q², q ← q|q|).

    Raises:
        DomainError: If q is zero or radicand is not a positive non-square.

    Example:
        >>> str(make_qi(0, 3, 2))
        '(0+√18)/9'
    """
    if q == 0:
        raise DomainError("denominator of a quadratic irrationality must be nonzero")
    if radicand <= 0 or is_square(radicand):
        raise DomainError(f"radicand {radicand} must be a positive non-square")
    if (radicand - p * p) % q != 0:
        scale = abs(q)
        p, q, radicand = p * scale, q * scale, radicand * scale * scale
    return QuadraticIrrational(p, q, radicand)


def _floor_surd(p: int, q: int, radicand: int) -> int:
    """Exact floor of (p + √radicand) / q for non-square radicand."""
    s = isqrt(radicand)
    if q > 0:
        return (p + s) // q
    return (-p - s - 1) // (-q)


def floor_qi(x: QuadraticIrrational) -> int:
    """Exact floor of x."""
    return _floor_surd(x.p, x.q, x.radicand)


def floor_conjugate(x: QuadraticIrrational) -> int:
    """Exact floor of the conjugate x' = (p - √radicand) / q."""
    return _floor_surd(-x.p, -x.q, x.radicand)


def is_reduced_qi(x: QuadraticIrrational) -> bool:
    """
    Test x > 1 and -1 < x' < 0 exactly.

    Both numbers are irrational, so x > 1 is floor(x) >= 1 and
    -1 < x' < 0 is floor(x') == -1.
    """
    return floor_qi(x) >= 1 and floor_conjugate(x) == -1


def cf_step(x: QuadraticIrrational) -> Tuple[int, QuadraticIrrational]:
    """
    One continued-fraction step: x = digit + 1/next.

    Returns:
        The pair (digit, next) with next canonical for the same radicand.

    Example:
        >>> digit, nxt = cf_step(make_qi(1, 2, 13))
        >>> digit, str(nxt)
        (2, '(3+√13)/2')
    """
    digit = floor_qi(x)
    p_next = digit * x.q - x.p
    q_next = (x.radicand - p_next * p_next) // x.q
    return digit, QuadraticIrrational(p_next, q_next, x.radicand)


def expand(x: QuadraticIrrational) -> CFExpansion:
    """
    Expand x until a complete quotient repeats.

    The canonical (p, q) state determines every later digit, so the first
    repeated state gives the minimal preperiod and the minimal period.
    """
    seen: Dict[QuadraticIrrational, int] = {}
    digits: List[int] = []
    states: List[QuadraticIrrational] = []
    state = x
    while state not in seen:
        seen[state] = len(digits)
        digit, nxt = cf_step(state)
        digits.append(digit)
        states.append(state)
        state = nxt
    start = seen[state]
    return CFExpansion(tuple(digits[:start]), tuple(digits[start:]), tuple(states[start:]))


def caliber_of(x: QuadraticIrrational) -> int:
    """Length m(x) of the periodic part of x."""
    return len(expand(x).period)


def omega(spec: FieldSpec) -> QuadraticIrrational:
    """
    The canonical generator ω_D of the ring of integers.

    Returns (0 + √D)/2 for D ≡ 0 mod 4 and (1 + √D)/2 for D ≡ 1 mod 4.
    """
    return make_qi(int(spec.omega_parity), 2, spec.D)


def period_one_closed_form(r: int) -> QuadraticIrrational:
    """The reduced number with expansion [r; r, r, ...], i.e. (r + √(r²+4))/2."""
    return make_qi(r, 2, r * r + 4)


def period_two_closed_form(a: int, b: int) -> QuadraticIrrational:
    """The reduced number with expansion [a; b, a, b, ...], i.e. (ab + √(a²b²+4ab))/(2b)."""
    return make_qi(a * b, 2 * b, a * a * b * b + 4 * a * b)


def _surd_parts(x: QuadraticIrrational) -> Tuple[Fraction, Fraction, int]:
    """Write x as rational + coefficient·√core with core square-free."""
    f, core = square_part(x.radicand)
    return Fraction(x.p, x.q), Fraction(f, x.q), core


def same_value(x: QuadraticIrrational, y: QuadraticIrrational) -> bool:
    """Exact equality of two irrationalities, possibly with different radicands."""
    return _surd_parts(x) == _surd_parts(y)


def reconstructs(x: QuadraticIrrational, digits: Sequence[int], tail: QuadraticIrrational) -> bool:
    """
    Check x = [digits; tail] exactly.

    With convergents h/k of the digits, [digits; t] = (h_n t + h_{n-1}) / (k_n t + k_{n-1}).
    The identity x (k_n t + k_{n-1}) = h_n t + h_{n-1} is tested in Q(√radicand).
    """
    if x.radicand != tail.radicand:
        return False
    h_prev, h = 1, digits[0] if digits else 0
    k_prev, k = 0, 1
    if not digits:
        h_prev, h, k_prev, k = 0, 1, 1, 0
    for digit in digits[1:]:
        h_prev, h = h, digit * h + h_prev
        k_prev, k = k, digit * k + k_prev
    radicand = x.radicand
    # elements r + s√radicand as (r, s)
    t = (Fraction(tail.p, tail.q), Fraction(1, tail.q))
    xv = (Fraction(x.p, x.q), Fraction(1, x.q))
    denominator = (k * t[0] + k_prev, k * t[1])
    numerator = (h * t[0] + h_prev, h * t[1])
    lhs = (xv[0] * denominator[0] + xv[1] * denominator[1] * radicand,
           xv[0] * denominator[1] + xv[1] * denominator[0])
    return lhs == numerator
