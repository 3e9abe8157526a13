"""
Richaud-Degert types, the special families and the class-number-one lists.

The fixture lists below are the published class-number-one classifications.
They are data: every check compares them with the computed class number and
reports a disagreement as an ANOMALY verdict instead of trusting either side.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

from caliber_cli.engine.arith import DomainError, field_spec, is_square, isqrt
from caliber_cli.engine.forms import CycleDecomposition, cycle_decomposition
from caliber_cli.engine.ideals import PrimitiveIdeal, is_principal, solve_sd
from caliber_cli.engine.theorems import CALIBER_ONE_SET, Verdict

# κ(d) = 1, from the caliber-one classification
KAPPA1 = CALIBER_ONE_SET
# κ(d) = 2 and d ≢ 5 mod 8, from the caliber-two classification
KAPPA2_NOT5MOD8 = frozenset({3, 6, 11, 38, 83, 227})
# h(d) = 1 for square-free d = n² + 4, as printed (19 is not of that form)
N2P4_CLASS_ONE = frozenset({13, 19, 53, 173, 293})
# h(d) = 1 for square-free d = n² + 1
N2P1_CLASS_ONE = frozenset({2, 17, 37, 101, 197, 677})
# h(d) = 1 for square-free d = n² ± 2
N2PM2_CLASS_ONE = frozenset({3, 6, 7, 11, 14, 23, 38, 47, 62, 83, 167, 227, 398})
# Richaud-Degert d ≢ 5 mod 8 with h(d) = 1 that are not n² ± 2
RD_EXCEPTIONS = frozenset({2, 3, 17, 33})

FIXTURE_SOURCES = {
    "KAPPA1": "caliber-one classification",
    "KAPPA2_NOT5MOD8": "caliber-two classification (d ≢ 5 mod 8)",
    "N2P4_CLASS_ONE": "class number one for n² + 4",
    "N2P1_CLASS_ONE": "class number one for n² + 1",
    "N2PM2_CLASS_ONE": "class number one for n² ± 2",
    "RD_EXCEPTIONS": "Richaud-Degert class number one criterion",
}

# |r| values always admitted as Richaud-Degert, whatever the range
_SPECIAL_R = (1, 2, 4)


class Family(str, Enum):
    """The four special shapes d = n² + r, n >= 1."""
    N2P1 = "N2P1"
    N2P4 = "N2P4"
    N2P2 = "N2P2"
    N2M2 = "N2M2"

    @property
    def offset(self) -> int:
        return _FAMILY_OFFSETS[self]


_FAMILY_OFFSETS = {Family.N2P1: 1, Family.N2P4: 4, Family.N2P2: 2, Family.N2M2: -2}

_FAMILY_LISTS = {
    Family.N2P1: N2P1_CLASS_ONE,
    Family.N2P4: N2P4_CLASS_ONE,
    Family.N2P2: N2PM2_CLASS_ONE,
    Family.N2M2: N2PM2_CLASS_ONE,
}


@dataclass(frozen=True, order=True)
class RDRepresentation:
    """
    d = n² + r with r ≠ 0 and r | 4n.

    Attributes:
        n: Positive integer.
        r: Nonzero integer.
        divides_2n: Whether the stronger r | 2n holds.
        in_standard_range: Whether -n < r <= n.
    """
    n: int
    r: int
    divides_2n: bool
    in_standard_range: bool

    @property
    def d(self) -> int:
        return self.n * self.n + self.r


def rd_representations(d: int) -> List[RDRepresentation]:
    """
    All Richaud-Degert representations of d, sorted by n.

    A representation is kept when -n < r <= n, or when |r| is 1, 2 or 4.
    Both cases force n to lie within one of isqrt(d).

    Example:
        >>> [(rep.n, rep.r) for rep in rd_representations(33)]
        [(6, -3)]
    """
    field_spec(d)
    s = isqrt(d)
    result = []
    for n in range(max(1, s - 1), s + 2):
        r = d - n * n
        if r == 0 or (4 * n) % r != 0:
            continue
        standard = -n < r <= n
        if standard or abs(r) in _SPECIAL_R:
            result.append(RDRepresentation(n, r, (2 * n) % r == 0, standard))
    return result


def minimal_rd(d: int) -> Optional[RDRepresentation]:
    """The representation with the smallest n, or None."""
    reps = rd_representations(d)
    return reps[0] if reps else None


def special_families(d: int) -> List[Family]:
    """Every family d belongs to, in declaration order."""
    matches = []
    for family in Family:
        rest = d - family.offset
        if rest >= 1 and is_square(rest):
            matches.append(family)
    return matches


def family_tag(d: int) -> str:
    """
    Families of d as a single tag: "NONE", one name, or names joined by "+".

    Example:
        >>> family_tag(5)
        'N2P1+N2P4'
    """
    families = special_families(d)
    if not families:
        return "NONE"
    return "+".join(family.value for family in families)


def _decompose(d: int, decomposition: Optional[CycleDecomposition]) -> CycleDecomposition:
    if decomposition is not None:
        return decomposition
    return cycle_decomposition(field_spec(d).D)


def check_prop31_necessary(d: int, decomposition: Optional[CycleDecomposition] = None) -> Verdict:
    """
    κ(d) = 1 forces h(d) = 1 and d = n² + 1 or n² + 4.

    Example:
        >>> check_prop31_necessary(13).value
        'pass'
    """
    dec = _decompose(d, decomposition)
    if dec.caliber != 1:
        return Verdict.VACUOUS
    families = set(special_families(d))
    if dec.class_number == 1 and families & {Family.N2P1, Family.N2P4}:
        return Verdict.PASS
    return Verdict.FAIL


def check_prop36_necessary(d: int, decomposition: Optional[CycleDecomposition] = None) -> Verdict:
    """
    κ(d) = 2 with d ≢ 5 mod 8 forces h(d) = 1 and a Richaud-Degert type.

    Raises:
        DomainError: If d ≡ 5 mod 8.
    """
    if d % 8 == 5:
        raise DomainError(f"the caliber-two criterion excludes d ≡ 5 mod 8, got d = {d}")
    dec = _decompose(d, decomposition)
    if dec.caliber != 2:
        return Verdict.VACUOUS
    if dec.class_number == 1 and rd_representations(d):
        return Verdict.PASS
    return Verdict.FAIL


def check_family_fixture(
        d: int,
        family: Family,
        decomposition: Optional[CycleDecomposition] = None,
) -> Verdict:
    """
    Compare h(d) = 1 with membership in the family's class-number-one list.

    Returns:
        VACUOUS when d is not in the family, PASS when the list and the
        computed class number agree, ANOMALY otherwise.
    """
    if family not in special_families(d):
        return Verdict.VACUOUS
    dec = _decompose(d, decomposition)
    listed = d in _FAMILY_LISTS[family]
    return Verdict.PASS if listed == (dec.class_number == 1) else Verdict.ANOMALY


def check_families(d: int, decomposition: Optional[CycleDecomposition] = None) -> Verdict:
    """check_family_fixture over every family of d, worst verdict first."""
    verdicts = [check_family_fixture(d, family, decomposition) for family in special_families(d)]
    if not verdicts:
        return Verdict.VACUOUS
    return Verdict.ANOMALY if Verdict.ANOMALY in verdicts else Verdict.PASS


def check_rd_class_one(d: int, decomposition: Optional[CycleDecomposition] = None) -> Verdict:
    """
    A Richaud-Degert d ≢ 5 mod 8 with h(d) = 1 is n² ± 2 or one of 2, 3, 17, 33.
    """
    if d % 8 == 5 or not rd_representations(d):
        return Verdict.VACUOUS
    dec = _decompose(d, decomposition)
    if dec.class_number != 1:
        return Verdict.VACUOUS
    families = set(special_families(d))
    if d in RD_EXCEPTIONS or families & {Family.N2P2, Family.N2M2}:
        return Verdict.PASS
    return Verdict.ANOMALY


def ideal_above_two(d: int) -> PrimitiveIdeal:
    """
    The primitive ideal of norm 2 with the smallest residue.

    This is [2, √d] for d ≡ 2 mod 4, [2, 1 + √d] for d ≡ 3 mod 4 and
    [2, (1 + √d)/2] for d ≡ 1 mod 8.

    Raises:
        DomainError: If 2 is inert (d ≡ 5 mod 8).
    """
    D = field_spec(d).D
    residues = solve_sd(2, D).residues
    if not residues:
        raise DomainError(f"2 is inert in Q(√{d})")
    return PrimitiveIdeal(2, residues[0], D)


def check_two_ideal_nonprincipal(d: int, decomposition: Optional[CycleDecomposition] = None) -> Verdict:
    """
    For d = n² + 1 the ideal above 2 is principal only for d = 2 and d = 17.

    d ≡ 5 mod 8 and d outside the family are vacuous.

    Example:
        >>> check_two_ideal_nonprincipal(10).value
        'pass'
    """
    if d % 8 == 5 or Family.N2P1 not in special_families(d):
        return Verdict.VACUOUS
    dec = _decompose(d, decomposition)
    principal = is_principal(ideal_above_two(d), dec)
    return Verdict.PASS if principal == (d in {2, 17}) else Verdict.ANOMALY


def check_fixture_lists(d: int, decomposition: Optional[CycleDecomposition] = None) -> Verdict:
    """
    Check d against the caliber and class-number-one lists.

    A listed d with the wrong κ or h fails. A d with κ = 1 missing from the
    caliber-one list, or κ = 2 and d ≢ 5 mod 8 missing from the caliber-two
    list, is an anomaly.
    """
    dec = _decompose(d, decomposition)
    kappa, h = dec.caliber, dec.class_number
    relevant = False
    if d in KAPPA1:
        relevant = True
        if (kappa, h) != (1, 1):
            return Verdict.FAIL
    if d in KAPPA2_NOT5MOD8:
        relevant = True
        if (kappa, h) != (2, 1) or d % 8 == 5:
            return Verdict.FAIL
    if d in N2P1_CLASS_ONE or d in N2PM2_CLASS_ONE:
        relevant = True
        if h != 1:
            return Verdict.FAIL
    if kappa == 1 and d not in KAPPA1:
        return Verdict.ANOMALY
    if kappa == 2 and d % 8 != 5 and d not in KAPPA2_NOT5MOD8:
        return Verdict.ANOMALY
    return Verdict.PASS if relevant else Verdict.VACUOUS
