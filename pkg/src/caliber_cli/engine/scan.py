"""
Deterministic range scanner and verification suites.

Ranges are cut into contiguous d-blocks. Each block is sieved for square-free
d, filtered, and turned into ScanRecords by a worker; blocks are merged in
index order, so the output never depends on the number of workers.
"""

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from math import gcd
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from sympy import isprime, primerange

from caliber_cli.engine.arith import (
    MAX_SCAN_D,
    DomainError,
    field_spec,
    is_fundamental_discriminant,
    kronecker_chi,
    smallest_split_prime,
    square_free_mask,
)
from caliber_cli.engine.classify import (
    KAPPA1,
    KAPPA2_NOT5MOD8,
    N2P1_CLASS_ONE,
    N2PM2_CLASS_ONE,
    Family,
    RDRepresentation,
    check_families,
    check_fixture_lists,
    check_prop31_necessary,
    check_prop36_necessary,
    check_rd_class_one,
    check_two_ideal_nonprincipal,
    family_tag,
    minimal_rd,
    special_families,
)
from caliber_cli.engine.contfrac import (
    caliber_of,
    expand,
    omega,
    period_one_closed_form,
    period_two_closed_form,
    reconstructs,
    same_value,
)
from caliber_cli.engine.forms import (
    CycleDecomposition,
    QuadForm,
    count_reduced,
    cycle_decomposition,
    enumerate_reduced,
    first_root,
    is_reduced_root,
    lift_to_reduced,
)
from caliber_cli.engine.ideals import (
    canonicalize_ideal,
    convolution_count,
    ideal_count,
    module_equals,
    rho,
    rho_by_formula,
    scaled_module,
    solve_sd,
)
from caliber_cli.engine.theorems import (
    Verdict,
    bound_report,
    check_pow2_corollary,
    check_split_prime_corollary,
    sandwich,
)

logger = logging.getLogger(__name__)

DEFAULT_BLOCK_SIZE = 1 << 12


class UnknownSuiteError(DomainError):
    """Raised when a verification suite name is not registered."""
    pass


@dataclass(frozen=True)
class ScanFilters:
    """
    Record filters, all optional and combined with AND.

    Attributes:
        kappa: Keep κ(d) equal to this.
        h: Keep h(d) equal to this.
        mod8: Keep d ≡ mod8 (mod 8).
        not_mod8: Drop d ≡ not_mod8 (mod 8).
        family: Keep d belonging to this family.
    """
    kappa: Optional[int] = None
    h: Optional[int] = None
    mod8: Optional[int] = None
    not_mod8: Optional[int] = None
    family: Optional[Family] = None

    def admits_residue(self, d: int) -> bool:
        if self.mod8 is not None and d % 8 != self.mod8:
            return False
        if self.not_mod8 is not None and d % 8 == self.not_mod8:
            return False
        return self.family is None or self.family in special_families(d)


@dataclass(frozen=True)
class ScanRecord:
    """
    Summary of one field.

    The record is a pure function of d; `as_dict` fixes the field order of
    every machine-readable output.
    """
    d: int
    D: int
    kappa: int
    h: int
    cycle_sizes: Tuple[int, ...]
    forms: Tuple[QuadForm, ...]
    smallest_split_prime: Optional[int]
    rd: Optional[RDRepresentation]
    family: str
    verdicts: Dict[str, Verdict] = field(default_factory=dict)

    @property
    def anomalies(self) -> Tuple[str, ...]:
        return tuple(name for name, verdict in self.verdicts.items() if verdict == Verdict.ANOMALY)

    @property
    def failures(self) -> Tuple[str, ...]:
        return tuple(name for name, verdict in self.verdicts.items() if verdict == Verdict.FAIL)

    @property
    def anomaly(self) -> bool:
        return bool(self.anomalies)

    def as_dict(self) -> Dict:
        return {
            "d": self.d,
            "D": self.D,
            "kappa": self.kappa,
            "h": self.h,
            "cycle_sizes": list(self.cycle_sizes),
            "forms": [f.as_list() for f in self.forms],
            "smallest_split_prime": self.smallest_split_prime,
            "rd": None if self.rd is None else {"n": self.rd.n, "r": self.rd.r},
            "family": self.family,
            "verdicts": {name: verdict.value for name, verdict in self.verdicts.items()},
            "anomaly": self.anomaly,
        }


def record_verdicts(d: int, decomposition: CycleDecomposition, cutoff: int = 100) -> Dict[str, Verdict]:
    """Every per-field check, in output order; pow2 and prop36 only where they apply."""
    kappa = decomposition.caliber
    report = bound_report(d, kappa, cutoff, rho_fn=rho_by_formula)
    verdicts = {
        "sandwich": report.verdict,
        "lowerbound": report.split_verdict,
    }
    if d % 8 == 1:
        verdicts["pow2"] = check_pow2_corollary(d, kappa)
    verdicts["prop31"] = check_prop31_necessary(d, decomposition)
    if d % 8 != 5:
        verdicts["prop36"] = check_prop36_necessary(d, decomposition)
    verdicts["corollary-splitprime"] = check_split_prime_corollary(d)
    verdicts["fixtures"] = check_fixture_lists(d, decomposition)
    verdicts["families"] = check_families(d, decomposition)
    verdicts["rd-class-one"] = check_rd_class_one(d, decomposition)
    verdicts["two-ideal"] = check_two_ideal_nonprincipal(d, decomposition)
    return verdicts


def build_record(d: int, cutoff: int = 100) -> ScanRecord:
    """
    Compute the full ScanRecord of Q(√d).

    Args:
        d: Square-free d >= 2.
        cutoff: Split primes are searched below this bound.

    Example:
        >>> record = build_record(10)
        >>> record.kappa, record.h, record.cycle_sizes
        (4, 2, (1, 3))
    """
    spec = field_spec(d)
    forms = enumerate_reduced(spec.D)
    decomposition = cycle_decomposition(spec.D, forms)
    return ScanRecord(
        d=d,
        D=spec.D,
        kappa=decomposition.caliber,
        h=decomposition.class_number,
        cycle_sizes=decomposition.cycle_sizes,
        forms=tuple(forms),
        smallest_split_prime=smallest_split_prime(spec, cutoff),
        rd=minimal_rd(d),
        family=family_tag(d),
        verdicts=record_verdicts(d, decomposition, cutoff),
    )


def _check_range(lo: int, hi: int) -> None:
    if lo < 2 or hi < lo:
        raise DomainError(f"invalid range [{lo}, {hi}]: need 2 <= lo <= hi")
    if hi > MAX_SCAN_D:
        raise DomainError(f"range end {hi} exceeds the scan limit {MAX_SCAN_D}")


def blocks(lo: int, hi: int, block_size: int = DEFAULT_BLOCK_SIZE) -> List[Tuple[int, int]]:
    """Split [lo, hi] into closed blocks of at most block_size values."""
    if block_size < 1:
        raise DomainError(f"block size must be positive, got {block_size}")
    return [(start, min(start + block_size - 1, hi)) for start in range(lo, hi + 1, block_size)]


def square_free_in(lo: int, hi: int) -> List[int]:
    """The square-free integers of [lo, hi] in increasing order."""
    mask = square_free_mask(lo, hi)
    return [lo + int(i) for i in mask.nonzero()[0]]


def _scan_block(filters: ScanFilters, cutoff: int, block: Tuple[int, int]) -> List[ScanRecord]:
    """Records of one block; the κ filter runs before anything expensive."""
    lo, hi = block
    records = []
    for d in square_free_in(lo, hi):
        if not filters.admits_residue(d):
            continue
        if filters.kappa is not None:
            D = 4 * d if d % 4 != 1 else d
            if count_reduced(D, stop_after=filters.kappa) != filters.kappa:
                continue
        record = build_record(d, cutoff)
        if filters.h is not None and record.h != filters.h:
            continue
        records.append(record)
    logger.debug("block [%d, %d]: %d records", lo, hi, len(records))
    return records


def _run_blocks(
        worker: Callable[[Any], List],
        chunks: Sequence[Any],
        jobs: int,
) -> Iterator[List]:
    """Apply worker to every chunk, yielding results in chunk order."""
    if jobs <= 1 or len(chunks) <= 1:
        for chunk in chunks:
            yield worker(chunk)
        return
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        yield from executor.map(worker, chunks)


def scan_range(
        lo: int,
        hi: int,
        filters: Optional[ScanFilters] = None,
        jobs: int = 1,
        block_size: int = DEFAULT_BLOCK_SIZE,
        cutoff: int = 100,
        on_block: Optional[Callable[[int], None]] = None,
) -> Iterator[ScanRecord]:
    """
    Stream the ScanRecords of every square-free d in [lo, hi] passing filters.

    Args:
        lo: First d, at least 2.
        hi: Last d, at most MAX_SCAN_D.
        filters: Optional record filters.
        jobs: Worker processes; 1 scans in-process.
        block_size: Width of the d-blocks handed to workers.
        cutoff: Split prime search bound.
        on_block: Called with the width of each finished block.

    Yields:
        Records ordered by d, identical for every value of jobs.

    Raises:
        DomainError: If the range is empty, starts below 2 or exceeds MAX_SCAN_D.

    Example:
        >>> len(list(scan_range(2, 50)))
        30
    """
    _check_range(lo, hi)
    filters = filters or ScanFilters()
    chunks = blocks(lo, hi, block_size)
    logger.info("scanning [%d, %d] in %d blocks with %d job(s)", lo, hi, len(chunks), jobs)
    worker = partial(_scan_block, filters, cutoff)
    for chunk, records in zip(chunks, _run_blocks(worker, chunks, jobs)):
        for record in records:
            if record.anomaly:
                logger.warning("d = %d flagged: %s", record.d, ", ".join(record.anomalies))
            yield record
        if on_block is not None:
            on_block(chunk[1] - chunk[0] + 1)


# ==================== VERIFICATION SUITES ====================


@dataclass(frozen=True)
class SuiteOptions:
    """
    Knobs of the sampled suites.

    Attributes:
        samples: Number of discriminants drawn for the ρ suites.
        limit: Largest A (or N) checked per sampled discriminant.
        pairs: Coprime (n, m) pairs per discriminant for multiplicativity.
        seed: Seed of the sampler; equal seeds give equal reports.
        cutoff: Split prime bound for the lower-bound suite.
    """
    samples: int = 50
    limit: int = 10_000
    pairs: int = 200
    seed: int = 0
    cutoff: int = 100

    def __post_init__(self):
        for name in ("samples", "limit", "pairs"):
            if getattr(self, name) < 1:
                raise DomainError(f"{name} must be at least 1, got {getattr(self, name)}")


@dataclass(frozen=True)
class CaseResult:
    """The verdict of one suite on one d, with a short explanation on failure."""
    d: int
    verdict: Verdict
    detail: str = ""


@dataclass(frozen=True)
class SuiteReport:
    """
    Outcome of a verification suite.

    Attributes:
        name: Suite name.
        lo: First d of the range.
        hi: Last d of the range.
        checked: Number of d evaluated.
        passed: Number of PASS verdicts.
        vacuous: Number of VACUOUS verdicts.
        anomalies: Every ANOMALY case.
        failures: Every FAIL case.
        failure_records: Full records of the failing d.
    """
    name: str
    lo: int
    hi: int
    checked: int
    passed: int
    vacuous: int
    anomalies: Tuple[CaseResult, ...]
    failures: Tuple[CaseResult, ...]
    failure_records: Tuple[ScanRecord, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> Dict:
        return {
            "suite": self.name,
            "from": self.lo,
            "to": self.hi,
            "checked": self.checked,
            "passed": self.passed,
            "vacuous": self.vacuous,
            "anomalies": [{"d": c.d, "detail": c.detail} for c in self.anomalies],
            "failures": [{"d": c.d, "detail": c.detail} for c in self.failures],
            "failure_records": [r.as_dict() for r in self.failure_records],
        }


def _verdict(condition: bool) -> Verdict:
    return Verdict.PASS if condition else Verdict.FAIL


def _sandwich_case(d: int, options: SuiteOptions) -> CaseResult:
    report = sandwich(d)
    detail = f"{report.lower_sum} <= {report.kappa} <= {report.upper_sum}"
    return CaseResult(d, report.verdict, "" if report.verdict == Verdict.PASS else detail)


def _lowerbound_case(d: int, options: SuiteOptions) -> CaseResult:
    report = bound_report(d, cutoff=options.cutoff, rho_fn=rho_by_formula)
    bad = [f"p={b.p}: {report.kappa} <= {b.bound}" for b in report.split_bounds if b.verdict != Verdict.PASS]
    return CaseResult(d, report.split_verdict, "; ".join(bad))


def _pow2_case(d: int, options: SuiteOptions) -> CaseResult:
    verdict = check_pow2_corollary(d)
    return CaseResult(d, verdict, "" if verdict == Verdict.PASS else "2^(κ+4) <= d")


def _prop31_case(d: int, options: SuiteOptions) -> CaseResult:
    return CaseResult(d, check_prop31_necessary(d))


def _prop36_case(d: int, options: SuiteOptions) -> CaseResult:
    return CaseResult(d, check_prop36_necessary(d))


def _splitprime_case(d: int, options: SuiteOptions) -> CaseResult:
    verdict = check_split_prime_corollary(d)
    return CaseResult(d, verdict, "no split prime p <= √D" if verdict == Verdict.ANOMALY else "")


def _structure_case(d: int, options: SuiteOptions) -> CaseResult:
    """Neighbor permutation, period of ω_D, the lift, ideal round trips and the period closed forms."""
    spec = field_spec(d)
    D = spec.D
    forms = enumerate_reduced(D)
    decomposition = cycle_decomposition(D, forms)
    problems = []
    if not is_fundamental_discriminant(D):
        problems.append(f"D = {D} is not fundamental")
    if decomposition.caliber != len(forms):
        problems.append(f"cycle sizes sum to {decomposition.caliber}, {len(forms)} reduced forms")
    if caliber_of(omega(spec)) != len(decomposition.principal_cycle):
        problems.append("period of ω_D differs from the principal cycle length")
    reduced = set(forms)
    lifted = set()
    lift_count = 0
    a = 1
    while 4 * a * a < D:
        for b0 in solve_sd(a, D).residues:
            lifted.add(lift_to_reduced(a, b0, D))
            lift_count += 1
            module = (a, (b0 - int(spec.omega_parity)) // 2, 1)
            content, prim = canonicalize_ideal(*module, D)
            if content != 1 or prim.b != b0 or not module_equals(scaled_module(content, prim), module):
                problems.append(f"ideal [{a}, ({b0}+√D)/2] does not round-trip")
        a += 1
    if len(lifted) != lift_count or not lifted <= reduced:
        problems.append(f"lift is not injective into the reduced set ({len(lifted)} of {lift_count})")
    for f in forms:
        x = first_root(f, D)
        expansion = expand(x)
        if not is_reduced_root(f, D) or not expansion.is_purely_periodic:
            problems.append(f"root of {f} is not purely periodic")
            continue
        if not reconstructs(x, expansion.period, x):
            problems.append(f"root of {f} does not reconstruct from its period")
        period = expansion.period
        if len(period) == 1 and not same_value(x, period_one_closed_form(period[0])):
            problems.append(f"period-one root of {f} misses its closed form")
        if len(period) == 2 and not same_value(x, period_two_closed_form(period[0], period[1])):
            problems.append(f"period-two root of {f} misses its closed form")
    return CaseResult(d, _verdict(not problems), "; ".join(problems))


def _rho_formula_case(d: int, options: SuiteOptions) -> CaseResult:
    D = field_spec(d).D
    bad = [a for a in range(1, options.limit + 1) if rho(a, D) != rho_by_formula(a, D)]
    return CaseResult(d, _verdict(not bad), f"A = {bad[:5]}" if bad else "")


def _multiplicativity_case(d: int, options: SuiteOptions) -> CaseResult:
    """ρ(nm) = ρ(n)ρ(m) on sampled coprime pairs, and ρ(p^α) = 2 for split p."""
    D = field_spec(d).D
    rng = random.Random(options.seed * 1_000_003 + d)
    problems = []
    for _ in range(options.pairs):
        n = rng.randint(1, max(1, options.limit // 2))
        m = rng.randint(1, max(1, options.limit // n))
        if gcd(n, m) != 1:
            continue
        if rho(n * m, D) != rho(n, D) * rho(m, D):
            problems.append(f"(n, m) = ({n}, {m})")
    for p in primerange(2, 51):
        if kronecker_chi(D, int(p)) != 1:
            continue
        power, alpha = int(p), 1
        while power <= options.limit:
            if rho(power, D) != 2:
                problems.append(f"ρ({p}^{alpha}) != 2")
            power *= int(p)
            alpha += 1
    return CaseResult(d, _verdict(not problems), "; ".join(problems[:5]))


def _convolution_case(d: int, options: SuiteOptions) -> CaseResult:
    D = field_spec(d).D
    bad = [n for n in range(1, options.limit + 1) if convolution_count(n, D) != ideal_count(n, D)]
    return CaseResult(d, _verdict(not bad), f"N = {bad[:5]}" if bad else "")


def _fixtures_case(d: int, options: SuiteOptions) -> CaseResult:
    verdict = check_fixture_lists(d)
    return CaseResult(d, verdict, "" if verdict == Verdict.PASS else verdict.value)


def _families_case(d: int, options: SuiteOptions) -> CaseResult:
    verdict = check_families(d)
    return CaseResult(d, verdict, f"{family_tag(d)} list disagrees with h(d)" if verdict == Verdict.ANOMALY else "")


def _rd_class_one_case(d: int, options: SuiteOptions) -> CaseResult:
    verdict = check_rd_class_one(d)
    return CaseResult(d, verdict, "class number one outside n² ± 2 and 2, 3, 17, 33" if verdict == Verdict.ANOMALY else "")


def _two_ideal_case(d: int, options: SuiteOptions) -> CaseResult:
    verdict = check_two_ideal_nonprincipal(d)
    return CaseResult(d, verdict, "principality of the ideal above 2 disagrees" if verdict == Verdict.ANOMALY else "")


def _all(candidates: List[int], options: SuiteOptions) -> List[int]:
    return candidates


def _sampled(count: Callable[[SuiteOptions], int]) -> Callable[[List[int], SuiteOptions], List[int]]:
    def select(candidates: List[int], options: SuiteOptions) -> List[int]:
        k = count(options)
        if len(candidates) <= k:
            return candidates
        return sorted(random.Random(options.seed).sample(candidates, k))
    return select


def _one_mod_8(candidates: List[int], options: SuiteOptions) -> List[int]:
    return [d for d in candidates if d % 8 == 1]


def _not_five_mod_8(candidates: List[int], options: SuiteOptions) -> List[int]:
    return [d for d in candidates if d % 8 != 5]


def _primes(candidates: List[int], options: SuiteOptions) -> List[int]:
    return [d for d in candidates if isprime(d)]


def _fixture_members(candidates: List[int], options: SuiteOptions) -> List[int]:
    listed = KAPPA1 | KAPPA2_NOT5MOD8 | N2P1_CLASS_ONE | N2PM2_CLASS_ONE
    return [d for d in candidates if d in listed]


@dataclass(frozen=True)
class Suite:
    """A named check with its candidate selection."""
    name: str
    description: str
    check: Callable[[int, SuiteOptions], CaseResult]
    select: Callable[[List[int], SuiteOptions], List[int]] = _all


SUITES: Dict[str, Suite] = {suite.name: suite for suite in (
    Suite("sandwich", "ρ sums bracket κ(d)", _sandwich_case),
    Suite("lowerbound", "κ(d) exceeds every split-prime bound", _lowerbound_case),
    Suite("pow2", "2^(κ(d)+4) > d for d ≡ 1 mod 8", _pow2_case, _one_mod_8),
    Suite("multiplicativity", "ρ is multiplicative on sampled coprime pairs", _multiplicativity_case,
          _sampled(lambda o: o.samples)),
    Suite("convolution", "r_K(N) equals the ρ convolution", _convolution_case,
          _sampled(lambda o: max(1, o.samples * 2 // 5))),
    Suite("prop31", "κ = 1 forces h = 1 and n² + 1 or n² + 4", _prop31_case),
    Suite("prop36", "κ = 2 forces h = 1 and Richaud-Degert type", _prop36_case, _not_five_mod_8),
    Suite("corollary-splitprime", "prime d has a split prime p <= √D", _splitprime_case, _primes),
    Suite("structure", "neighbor cycles, ω_D period and the lift", _structure_case),
    Suite("rho-formula", "direct ρ equals the multiplicative formula", _rho_formula_case,
          _sampled(lambda o: o.samples)),
    Suite("fixtures", "published κ and class-number lists", _fixtures_case, _fixture_members),
    Suite("families", "special-family class-number-one lists", _families_case),
    Suite("rd-class-one", "Richaud-Degert class number one criterion", _rd_class_one_case),
    Suite("two-ideal", "the ideal above 2 for n² + 1", _two_ideal_case),
)}


def get_suite(name: str) -> Suite:
    """
    Look up a suite by name.

    Raises:
        UnknownSuiteError: If no suite has that name.
    """
    try:
        return SUITES[name]
    except KeyError:
        raise UnknownSuiteError(f"unknown suite '{name}'; choose from {', '.join(SUITES)}") from None


def _run_cases(name: str, options: SuiteOptions, values: Sequence[int]) -> List[CaseResult]:
    check = SUITES[name].check
    return [check(d, options) for d in values]


def verify_suite(
        name: str,
        lo: int,
        hi: int,
        jobs: int = 1,
        options: Optional[SuiteOptions] = None,
        on_case: Optional[Callable[[int], None]] = None,
) -> SuiteReport:
    """
    Run a named suite over the square-free d in [lo, hi].

    Args:
        name: A key of SUITES.
        lo: First d.
        hi: Last d.
        jobs: Worker processes.
        options: Sampling and bound knobs.
        on_case: Called with the number of cases in each finished chunk.

    Raises:
        UnknownSuiteError: If the suite is not registered.
        DomainError: If the range is invalid.
    """
    suite = get_suite(name)
    _check_range(lo, hi)
    options = options or SuiteOptions()
    values = suite.select(square_free_in(lo, hi), options)
    logger.info("suite %s: %d case(s) in [%d, %d]", name, len(values), lo, hi)
    chunk_size = max(1, min(256, len(values) // max(1, 4 * jobs) or 1))
    chunks = [values[i:i + chunk_size] for i in range(0, len(values), chunk_size)]
    worker = partial(_run_cases, name, options)
    results: List[CaseResult] = []
    for batch in _run_blocks(worker, chunks, jobs):
        results.extend(batch)
        if on_case is not None:
            on_case(len(batch))
    return summarize(name, lo, hi, results, options.cutoff)


def summarize(name: str, lo: int, hi: int, results: Iterable[CaseResult], cutoff: int = 100) -> SuiteReport:
    """Fold case results into a SuiteReport, attaching full records of failures."""
    results = list(results)
    failures = tuple(r for r in results if r.verdict == Verdict.FAIL)
    anomalies = tuple(r for r in results if r.verdict == Verdict.ANOMALY)
    for case in failures:
        logger.warning("suite %s failed at d = %d: %s", name, case.d, case.detail)
    return SuiteReport(
        name=name,
        lo=lo,
        hi=hi,
        checked=len(results),
        passed=sum(1 for r in results if r.verdict == Verdict.PASS),
        vacuous=sum(1 for r in results if r.verdict == Verdict.VACUOUS),
        anomalies=anomalies,
        failures=failures,
        failure_records=tuple(build_record(case.d, cutoff) for case in failures),
    )
