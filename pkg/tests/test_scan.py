import pytest

from caliber_cli.engine.arith import MAX_SCAN_D, DomainError
from caliber_cli.engine.classify import Family
from caliber_cli.engine.scan import (
    SUITES,
    ScanFilters,
    SuiteOptions,
    UnknownSuiteError,
    blocks,
    build_record,
    get_suite,
    scan_range,
    square_free_in,
    verify_suite,
)
from caliber_cli.engine.theorems import Verdict
from conftest import brute_square_free


class TestBuildRecord:
    def test_d_10(self):
        record = build_record(10)
        assert (record.d, record.D, record.kappa, record.h) == (10, 40, 4, 2)
        assert record.cycle_sizes == (1, 3)
        assert record.smallest_split_prime == 3
        assert (record.rd.n, record.rd.r) == (3, 1)
        assert record.family == "N2P1"

    def test_field_order(self):
        assert list(build_record(13).as_dict()) == [
            "d", "D", "kappa", "h", "cycle_sizes", "forms", "smallest_split_prime",
            "rd", "family", "verdicts", "anomaly",
        ]

    def test_verdict_keys_follow_residue(self):
        assert "pow2" in build_record(17).verdicts
        assert "pow2" not in build_record(13).verdicts
        assert "prop36" not in build_record(13).verdicts
        assert "prop36" in build_record(7).verdicts

    def test_anomalies(self):
        record = build_record(5)
        assert record.anomaly
        assert "fixtures" in record.anomalies
        assert "corollary-splitprime" in record.anomalies
        assert not build_record(13).anomaly

    def test_no_failures_up_to_300(self):
        for record in scan_range(2, 300):
            assert not record.failures, record.d


class TestRangeHelpers:
    def test_blocks(self):
        assert blocks(2, 10, 4) == [(2, 5), (6, 9), (10, 10)]
        with pytest.raises(DomainError):
            blocks(2, 10, 0)

    def test_square_free_in(self):
        assert square_free_in(2, 12) == [2, 3, 5, 6, 7, 10, 11]


class TestScanRange:
    def test_every_square_free_d(self):
        records = list(scan_range(2, 50))
        assert len(records) == 30
        assert [r.d for r in records] == [d for d in range(2, 51) if brute_square_free(d)]

    def test_caliber_one(self):
        records = list(scan_range(2, 300, ScanFilters(kappa=1)))
        assert [r.d for r in records] == [2, 5, 13, 29, 53, 173, 293]
        assert all(r.h == 1 for r in records)

    def test_caliber_two_outside_five_mod_eight(self):
        records = scan_range(2, 300, ScanFilters(kappa=2, not_mod8=5))
        assert [r.d for r in records] == [3, 6, 11, 38, 83, 227]

    def test_family_filter(self):
        records = scan_range(2, 100, ScanFilters(family=Family.N2M2))
        assert [r.d for r in records] == [2, 7, 14, 23, 34, 47, 62, 79]

    def test_residue_and_class_number_filters(self):
        records = list(scan_range(2, 200, ScanFilters(mod8=1, h=1)))
        assert records
        assert all(r.d % 8 == 1 and r.h == 1 for r in records)

    def test_jobs_do_not_change_output(self):
        serial = [r.as_dict() for r in scan_range(2, 400, jobs=1, block_size=37)]
        parallel = [r.as_dict() for r in scan_range(2, 400, jobs=2, block_size=37)]
        assert serial == parallel
        assert serial == [r.as_dict() for r in scan_range(2, 400)]

    def test_records_are_pure_functions_of_d(self):
        scanned = {r.d: r for r in scan_range(90, 130)}
        for d in (91, 94, 101, 127):
            assert scanned[d] == build_record(d)

    def test_reports_block_progress(self):
        widths = []
        list(scan_range(2, 100, block_size=30, on_block=widths.append))
        assert widths == [30, 30, 30, 9]

    @pytest.mark.parametrize("lo, hi", [(1, 10), (10, 5), (2, MAX_SCAN_D + 1)])
    def test_rejects_bad_range(self, lo, hi):
        with pytest.raises(DomainError):
            list(scan_range(lo, hi))

    @pytest.mark.slow
    def test_caliber_census_to_100000(self):
        kappa_one = [r.d for r in scan_range(2, 100_000, ScanFilters(kappa=1), jobs=4)]
        assert kappa_one == [2, 5, 13, 29, 53, 173, 293]


class TestSuites:
    def test_registry(self):
        assert set(SUITES) == {
            "sandwich", "lowerbound", "pow2", "multiplicativity", "convolution", "prop31", "prop36",
            "corollary-splitprime", "structure", "rho-formula", "fixtures", "families",
            "rd-class-one", "two-ideal",
        }
        with pytest.raises(UnknownSuiteError):
            get_suite("nope")
        assert issubclass(UnknownSuiteError, DomainError)

    def test_sandwich(self):
        report = verify_suite("sandwich", 2, 300)
        assert report.ok
        assert report.checked == len(square_free_in(2, 300))
        assert report.passed == report.checked

    def test_pow2_only_checks_one_mod_eight(self):
        report = verify_suite("pow2", 2, 500)
        assert report.ok
        assert report.checked == len([d for d in square_free_in(2, 500) if d % 8 == 1])

    def test_split_prime_anomalies(self):
        report = verify_suite("corollary-splitprime", 2, 100)
        assert report.ok
        assert {case.d for case in report.anomalies} == {3, 5}

    @pytest.mark.parametrize("name", ["lowerbound", "prop31", "prop36", "structure", "rd-class-one", "two-ideal"])
    def test_small_ranges_pass(self, name):
        report = verify_suite(name, 2, 200)
        assert report.ok, report.failures
        assert report.checked > 0

    def test_sampled_suites(self):
        options = SuiteOptions(samples=5, limit=300, pairs=50, seed=3)
        for name in ("rho-formula", "multiplicativity"):
            report = verify_suite(name, 2, 1000, options=options)
            assert report.ok, report.failures
            assert report.checked == 5
        assert verify_suite("convolution", 2, 1000, options=options).checked == 2

    @pytest.mark.parametrize("knob", ["samples", "limit", "pairs"])
    def test_options_must_be_positive(self, knob):
        with pytest.raises(DomainError):
            SuiteOptions(**{knob: 0})

    def test_sampling_is_seeded(self):
        options = SuiteOptions(samples=4, limit=50, seed=7)
        first = verify_suite("rho-formula", 2, 5000, options=options)
        second = verify_suite("rho-formula", 2, 5000, jobs=2, options=options)
        assert first.as_dict() == second.as_dict()

    def test_fixtures(self):
        report = verify_suite("fixtures", 2, 1000)
        assert report.ok
        assert report.checked == 24

    def test_families_flags_known_disagreements(self):
        report = verify_suite("families", 2, 300)
        assert report.ok
        assert {5, 29} <= {case.d for case in report.anomalies}

    def test_range_is_validated(self):
        with pytest.raises(DomainError):
            verify_suite("sandwich", 1, 10)

    def test_report_dict(self):
        report = verify_suite("sandwich", 2, 20)
        payload = report.as_dict()
        assert (payload["suite"], payload["from"], payload["to"]) == ("sandwich", 2, 20)
        assert payload["failures"] == []
        assert Verdict.PASS.value == "pass"


@pytest.mark.slow
@pytest.mark.parametrize("name", ["sandwich", "lowerbound", "structure"])
def test_acceptance_suites_to_10000(name):
    report = verify_suite(name, 2, 10_000, jobs=4)
    assert report.ok, report.failures


@pytest.mark.slow
def test_acceptance_rho_suites():
    assert verify_suite("rho-formula", 2, 10_000, jobs=4).ok
    assert verify_suite("convolution", 2, 10_000, jobs=4).ok


@pytest.mark.slow
def test_caliber_two_census_to_100000():
    records = scan_range(2, 100_000, ScanFilters(kappa=2, not_mod8=5), jobs=4)
    assert [r.d for r in records] == [3, 6, 11, 38, 83, 227]
