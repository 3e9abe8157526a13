"""
Exact integer utilities.

This module provides square-free testing, fundamental discriminants, integer
square roots with exact comparisons against surds, prime generation and the
Kronecker character. Nothing in here touches floating point.
"""

import math
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np
from sympy import factorint, primerange

# Largest square-free d accepted by single-field operations
MAX_FIELD_D = 10**12
# Largest d accepted by range scans; D = 4d and every B*B stay far inside int64
MAX_SCAN_D = 10**7
# Factorisations up to this bound come from a cached smallest-prime-factor table
SPF_TABLE_LIMIT = 1 << 21


class DomainError(ValueError):
    """Raised when an input lies outside the mathematical domain of an operation."""
    pass


class OmegaParity(IntEnum):
    """
    Shape of the canonical generator ω_D.

    The integer value is the rational numerator of ω_D, so that
    ω_D = (value + √D) / 2 in both cases.
    """
    HALF_ROOT = 0  # D ≡ 0 mod 4, ω = √D/2
    HALF_ONE_PLUS_ROOT = 1  # D ≡ 1 mod 4, ω = (1+√D)/2


@dataclass(frozen=True)
class FieldSpec:
    """
    A real quadratic field Q(√d) described by its square-free d.

    Attributes:
        d: Positive square-free integer, at least 2.
        D: Fundamental discriminant (d if d ≡ 1 mod 4, else 4d).
        omega_parity: Which of the two shapes ω_D takes.
    """
    d: int
    D: int
    omega_parity: OmegaParity


def isqrt(n: int) -> int:
    """
    Return the largest t with t*t <= n.

    Raises:
        DomainError: If n is negative.

    Example:
        >>> isqrt(293)
        17
    """
    if n < 0:
        raise DomainError(f"isqrt of negative number {n}")
    return math.isqrt(n)


def is_square(n: int) -> bool:
    """Check whether n is a perfect square (negative numbers never are)."""
    if n < 0:
        return False
    root = math.isqrt(n)
    return root * root == n


def lt_sqrt(x: int, D: int) -> bool:
    """Exact test of x < √D for a non-square D > 0."""
    return x < 0 or x * x < D


def gt_sqrt(x: int, D: int) -> bool:
    """Exact test of x > √D for a non-square D > 0."""
    return x > 0 and x * x > D


def is_square_free(n: int) -> bool:
    """
    Check that no prime square divides n, by trial division up to isqrt(n).

    Args:
        n: A positive integer.

    Returns:
        True iff n has no square factor greater than 1.

    Example:
        >>> is_square_free(12)
        False
        >>> is_square_free(293)
        True
    """
    if n < 1:
        raise DomainError(f"square-free test needs n >= 1, got {n}")
    if n % 4 == 0:
        return False
    if n % 2 == 0:
        n //= 2
    p = 3
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return False
        p += 2
    return True


def square_free_mask(lo: int, hi: int) -> np.ndarray:
    """
    Sieve the square-free integers of the closed interval [lo, hi].

    Args:
        lo: Lower end, at least 1.
        hi: Upper end, at least lo.

    Returns:
        Boolean array whose entry i tells whether lo + i is square-free.
    """
    if lo < 1 or hi < lo:
        raise DomainError(f"invalid sieve interval [{lo}, {hi}]")
    mask = np.ones(hi - lo + 1, dtype=bool)
    for p in primerange(2, math.isqrt(hi) + 1):
        square = p * p
        first = -(-lo // square) * square
        mask[first - lo::square] = False
    return mask


def field_spec(d: int) -> FieldSpec:
    """
    Build the FieldSpec of Q(√d).

    Raises:
        DomainError: If d < 2, d is not square-free or d exceeds MAX_FIELD_D.

    Example:
        >>> field_spec(3).D
        12
    """
    if d < 2:
        raise DomainError(f"d must be at least 2, got {d}")
    if d > MAX_FIELD_D:
        raise DomainError(f"d = {d} exceeds the supported limit {MAX_FIELD_D}")
    if not is_square_free(d):
        raise DomainError(f"d = {d} is not square-free")
    if d % 4 == 1:
        return FieldSpec(d, d, OmegaParity.HALF_ONE_PLUS_ROOT)
    return FieldSpec(d, 4 * d, OmegaParity.HALF_ROOT)


def field_from_discriminant(D: int) -> FieldSpec:
    """
    Recover the FieldSpec from a fundamental discriminant D > 0.

    Raises:
        DomainError: If D is not the discriminant of a real quadratic field.
    """
    if D % 4 == 1:
        d = D
    elif D % 4 == 0 and (D // 4) % 4 in (2, 3):
        d = D // 4
    else:
        raise DomainError(f"D = {D} is not a fundamental discriminant")
    try:
        spec = field_spec(d)
    except DomainError as e:
        raise DomainError(f"D = {D} is not a fundamental discriminant ({e})") from e
    if spec.D != D:
        raise DomainError(f"D = {D} is not a fundamental discriminant")
    return spec


def is_fundamental_discriminant(D: int) -> bool:
    """Check whether D is the discriminant of some real quadratic field."""
    try:
        field_from_discriminant(D)
    except DomainError:
        return False
    return True


def kronecker_chi(D: int, n: int) -> int:
    """
    Evaluate the Kronecker symbol (D/n) for n >= 1.

    The odd part is handled by the Jacobi reciprocity loop, the power of
    two by the (D/2) rule, so the function is completely multiplicative in n.

    Args:
        D: A discriminant (any integer works).
        n: A positive integer.

    Returns:
        -1, 0 or 1.

    Example:
        >>> kronecker_chi(13, 3)
        1
        >>> kronecker_chi(8, 2)
        0
    """
    if n < 1:
        raise DomainError(f"Kronecker symbol needs n >= 1, got {n}")
    a = D
    result = 1
    if n % 2 == 0:
        if a % 2 == 0:
            return 0
        twos = (n & -n).bit_length() - 1
        n >>= twos
        if twos % 2 == 1 and a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def smallest_split_prime(spec: FieldSpec, bound: int) -> Optional[int]:
    """
    Find the smallest prime p <= bound that splits in the field.

    Args:
        spec: The field.
        bound: Search bound, at least 2.

    Returns:
        The prime, or None if every prime up to bound is inert or ramified.
    """
    if bound < 2:
        raise DomainError(f"split prime bound must be at least 2, got {bound}")
    for p in primerange(2, bound + 1):
        if kronecker_chi(spec.D, int(p)) == 1:
            return int(p)
    return None


@lru_cache(maxsize=1)
def _smallest_prime_factors(limit: int) -> np.ndarray:
    """Smallest-prime-factor table; entry 0 marks a prime (or 0, 1)."""
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in primerange(2, math.isqrt(limit) + 1):
        tail = spf[p * p::p]
        tail[tail == 0] = p
    return spf


def factorize(n: int) -> Dict[int, int]:
    """
    Factor a positive integer.

    Returns:
        Mapping prime -> exponent; empty for n = 1.
    """
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    if n > SPF_TABLE_LIMIT:
        return {int(p): int(e) for p, e in factorint(n).items()}
    spf = _smallest_prime_factors(SPF_TABLE_LIMIT)
    factors: Dict[int, int] = {}
    while n > 1:
        p = int(spf[n]) or n
        count = 0
        while n % p == 0:
            n //= p
            count += 1
        factors[p] = count
    return factors


def divisors(n: int) -> List[int]:
    """Return the positive divisors of n in increasing order."""
    result = [1]
    for p, e in factorize(n).items():
        result = [q * p**k for q in result for k in range(e + 1)]
    return sorted(result)


def square_part(n: int) -> Tuple[int, int]:
    """
    Split n >= 1 as f*f*core with core square-free.

    Returns:
        The pair (f, core).
    """
    f, core = 1, 1
    for p, e in factorize(n).items():
        f *= p ** (e // 2)
        if e % 2:
            core *= p
    return f, core
