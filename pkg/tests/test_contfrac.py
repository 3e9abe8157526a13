import pytest

from caliber_cli.engine.arith import DomainError, field_spec
from caliber_cli.engine.contfrac import (
    QuadraticIrrational,
    caliber_of,
    cf_step,
    expand,
    floor_conjugate,
    floor_qi,
    is_reduced_qi,
    make_qi,
    omega,
    period_one_closed_form,
    period_two_closed_form,
    reconstructs,
    same_value,
)


class TestMakeQi:
    def test_keeps_canonical_input(self):
        assert make_qi(1, 2, 13) == QuadraticIrrational(1, 2, 13)
        assert make_qi(0, 1, 2) == QuadraticIrrational(0, 1, 2)

    def test_rescales_when_q_does_not_divide(self):
        x = make_qi(0, 3, 2)
        assert x == QuadraticIrrational(0, 9, 18)
        assert str(x) == "(0+√18)/9"
        assert same_value(x, QuadraticIrrational(0, 1, 2)) is False
        assert same_value(x, make_qi(0, 3, 2))

    @pytest.mark.parametrize("p, q, radicand", [(1, 0, 13), (0, 1, 4), (0, 1, -3), (0, 1, 0)])
    def test_rejects_bad_input(self, p, q, radicand):
        with pytest.raises(DomainError):
            make_qi(p, q, radicand)


def test_floors_are_exact():
    x = make_qi(1, 2, 13)  # ≈ 2.30, conjugate ≈ -1.30
    assert floor_qi(x) == 2
    assert floor_conjugate(x) == -2
    y = make_qi(3, 2, 13)  # ≈ 3.30, conjugate ≈ -0.30
    assert floor_qi(y) == 3
    assert floor_conjugate(y) == -1


def test_is_reduced_qi():
    assert is_reduced_qi(make_qi(3, 2, 13))
    assert not is_reduced_qi(make_qi(1, 2, 13))
    assert not is_reduced_qi(make_qi(0, 1, 2))
    assert is_reduced_qi(make_qi(1, 1, 2))


class TestCfStep:
    def test_omega_13(self):
        digit, nxt = cf_step(make_qi(1, 2, 13))
        assert digit == 2
        assert nxt == QuadraticIrrational(3, 2, 13)

    def test_fixed_point(self):
        x = make_qi(3, 2, 13)
        assert cf_step(x) == (3, x)

    def test_one_plus_root_three(self):
        digit, nxt = cf_step(make_qi(1, 1, 3))
        assert digit == 2
        assert nxt == QuadraticIrrational(1, 2, 3)


class TestExpand:
    def test_omega_13(self):
        expansion = expand(make_qi(1, 2, 13))
        assert expansion.preperiod == (2,)
        assert expansion.period == (3,)
        assert not expansion.is_purely_periodic

    def test_root_two(self):
        expansion = expand(make_qi(0, 1, 2))
        assert expansion.preperiod == (1,)
        assert expansion.period == (2,)

    def test_omega_17(self):
        expansion = expand(omega(field_spec(17)))
        assert expansion.preperiod == (2,)
        assert expansion.period == (1, 1, 3)
        assert expansion.periodic_states[0] == QuadraticIrrational(3, 4, 17)

    def test_reduced_number_is_purely_periodic(self):
        assert expand(make_qi(3, 2, 13)).is_purely_periodic


@pytest.mark.parametrize("d, length", [(13, 1), (3, 2), (17, 3), (10, 1), (2, 1)])
def test_caliber_of_omega(d, length):
    assert caliber_of(omega(field_spec(d))) == length


def test_omega_shapes():
    assert omega(field_spec(13)) == QuadraticIrrational(1, 2, 13)
    assert omega(field_spec(3)) == QuadraticIrrational(0, 2, 12)
    assert same_value(omega(field_spec(3)), make_qi(0, 1, 3))


def test_period_one_closed_form():
    x = period_one_closed_form(3)
    assert same_value(x, make_qi(3, 2, 13))
    assert expand(x).period == (3,)
    assert reconstructs(x, (3,), x)


def test_period_two_closed_form():
    x = period_two_closed_form(2, 1)
    assert same_value(x, make_qi(1, 1, 3))
    assert expand(x).period == (2, 1)


class TestReconstructs:
    def test_purely_periodic(self):
        x = make_qi(3, 2, 13)
        assert reconstructs(x, (3,), x)

    def test_with_preperiod(self):
        assert reconstructs(make_qi(1, 2, 13), (2,), make_qi(3, 2, 13))

    def test_wrong_tail(self):
        assert not reconstructs(make_qi(1, 2, 13), (2,), make_qi(1, 2, 13))

    def test_empty_digits_is_identity(self):
        x = make_qi(1, 2, 13)
        assert reconstructs(x, (), x)

    def test_every_period_reconstructs(self):
        for d in (2, 3, 6, 7, 13, 17, 19, 31, 94):
            expansion = expand(omega(field_spec(d)))
            start = expansion.periodic_states[0]
            assert reconstructs(start, expansion.period, start), d
