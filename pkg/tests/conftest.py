"""
Shared fixtures and brute-force oracles.

The oracles deliberately avoid the engine's fast paths: they scan every
candidate directly so that agreement is meaningful.
"""

import math
from typing import List, Tuple

import pytest

Triple = Tuple[int, int, int]


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Keep every test away from the real ~/.caliber_cli and CALIBER_JOBS."""
    monkeypatch.setenv("CALIBER_CLI_HOME", str(tmp_path / "config"))
    monkeypatch.delenv("CALIBER_JOBS", raising=False)
    return tmp_path / "config"


def brute_square_free(n: int) -> bool:
    return all(n % (k * k) != 0 for k in range(2, math.isqrt(n) + 1))


def brute_discriminant(d: int) -> int:
    return d if d % 4 == 1 else 4 * d


def brute_reduced_forms(D: int) -> List[Triple]:
    """Every [A, B, C] with 0 < A < √D, -√D < B < 0 meeting the reduced condition."""
    s = math.isqrt(D)
    forms = []
    for a in range(1, s + 1):
        for b in range(-s, 0):
            if (b * b - D) % (4 * a) != 0:
                continue
            c = (b * b - D) // (4 * a)
            if c >= 0:
                continue
            lower = 2 * a + abs(b)
            upper = 2 * a - abs(b)
            if lower * lower > D and (upper < 0 or upper * upper < D):
                forms.append((a, b, c))
    return sorted(forms)


def brute_chi(D: int, p: int) -> int:
    """χ_D(p) for a prime p by residue search."""
    if D % p == 0:
        return 0
    if p == 2:
        return 1 if D % 8 in (1, 7) else -1
    residues = {x * x % p for x in range(1, p)}
    return 1 if D % p in residues else -1


def brute_rho(a: int, D: int) -> int:
    return sum(1 for b in range(2 * a) if (b * b - D) % (4 * a) == 0)


def brute_rd(d: int) -> List[Tuple[int, int]]:
    """(n, r) with d = n² + r, r | 4n, and -n < r <= n or |r| in {1, 2, 4}."""
    reps = []
    for n in range(1, math.isqrt(d) + 2):
        r = d - n * n
        if r != 0 and (4 * n) % abs(r) == 0 and (-n < r <= n or abs(r) in (1, 2, 4)):
            reps.append((n, r))
    return reps


def small_primes(bound: int) -> List[int]:
    return [p for p in range(2, bound) if all(p % q for q in range(2, math.isqrt(p) + 1))]


@pytest.fixture
def square_free_d():
    """Square-free d in [2, 300]."""
    return [d for d in range(2, 301) if brute_square_free(d)]
