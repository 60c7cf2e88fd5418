import math

import numpy as np
import pytest

from paranorms import generator as gen
from paranorms import expr as ex


class TestConstruction:
    def test_power_basics(self):
        g = gen.power(2)
        assert g.value(3.0) == 9.0
        assert g.inverse(9.0) == 3.0
        assert g.value(0.0) == 0.0

    def test_exp_family(self):
        g = gen.exp_minus_one()
        assert g.value(math.log(2)) == pytest.approx(1.0, abs=1e-15)
        assert g.inverse(2.0) == pytest.approx(math.log(3), abs=1e-15)

    def test_expression_generator_accepted(self):
        g = gen.from_expression("t^3/(t+1)")
        assert g.value(2.0) == pytest.approx(8 / 3)

    def test_parameter_ranges(self):
        with pytest.raises(gen.GeneratorError):
            gen.power(0.5)
        with pytest.raises(gen.GeneratorError):
            gen.exp_minus_one(1.0)
        with pytest.raises(gen.GeneratorError):
            gen.power_times_exp(0.0, 2.0)

    def test_rejects_nonzero_at_origin(self):
        with pytest.raises(gen.GeneratorError, match="phi\\(0\\)"):
            gen.from_expression("exp(t)")

    def test_rejects_non_monotone_with_witness(self):
        with pytest.raises(gen.NotBijectiveError) as info:
            gen.from_expression("t*(2-t)", t_max=10.0)
        t1, t2 = info.value.witness
        g = ex.parse("t*(2-t)")
        assert ex.evaluate(g, t1) >= ex.evaluate(g, t2)

    def test_t_max_defaults(self):
        assert gen.power(3).t_max == 1e8
        assert gen.exp_minus_one().t_max == pytest.approx(700.0)
        assert gen.from_expression("t^2").t_max == 1e8
        assert gen.from_expression("exp(t)-1").t_max == 700.0


class TestInverse:
    def test_roundtrip_grid(self):
        for g in [gen.power(3.5), gen.exp_minus_one(2.0),
                  gen.power_times_exp(2, math.e), gen.cubic_rational(3),
                  gen.from_expression("t^3/(t+1)")]:
            for t in g.audit_grid():
                y = g.value(float(t))
                back = g.inverse(y)
                assert abs(back - t) <= 1e-10 * max(1.0, t), g.name

    def test_monotone(self):
        g = gen.cubic_rational(3)
        ys = np.linspace(0.01, 40.0, 50)
        ts = [g.inverse(float(y)) for y in ys]
        assert all(a <= b for a, b in zip(ts, ts[1:]))

    def test_exp_closed_form_matches_bisection(self):
        g = gen.exp_minus_one()
        for y in [1e-6, 0.5, 2.0, 100.0, 1e6]:
            closed = g.inverse(y)
            numeric = g._inverse_bisect(y)
            assert abs(closed - numeric) <= 1e-12 * max(1.0, closed)

    def test_inverse_residual_contract(self):
        g = gen.power_times_exp(1, math.e)
        for y in [1e-8, 1.0, 1e4, 1e12]:
            t = g.inverse(y)
            assert abs(g.value(t) - y) <= 1e-12 * max(1.0, y)

    def test_cubic_rational_forward_then_invert(self):
        g = gen.cubic_rational(3)
        assert g.inverse(8 / 3) == pytest.approx(2.0, abs=1e-12)

    def test_overflow_reports_attempted_range(self):
        # t/(t+1) is bounded by 1: inverting 2 must fail with the range
        g = gen.cubic_rational(1)
        with pytest.raises(gen.InverseOverflowError) as info:
            g.inverse(2.0)
        assert info.value.t_max == g.t_max

    def test_array_inverse_matches_scalar(self):
        g = gen.cubic_rational(3)
        ys = np.linspace(0.5, 20.0, 17)
        arr = g.inverse_array(ys)
        scalars = [g.inverse(float(y)) for y in ys]
        np.testing.assert_allclose(arr, scalars, rtol=1e-13)

    def test_inverse_of_zero(self):
        for g in [gen.power(2), gen.cubic_rational(3)]:
            assert g.inverse(0.0) == 0.0
            assert g.inverse_array(np.array([0.0]))[0] == 0.0


class TestDerivatives:
    def test_power_first(self):
        assert gen.power(2).deriv1(3.0) == 6.0

    def test_exp_second(self):
        assert gen.exp_minus_one().deriv2(0.5) == pytest.approx(math.exp(0.5))

    def test_cubic_matches_fd(self):
        g = gen.cubic_rational(3)
        h = np.finfo(float).eps ** (1 / 3) * 2
        cd = (g.value(2 + h) - g.value(2 - h)) / (2 * h)
        assert g.deriv1(2.0) == pytest.approx(cd, rel=1e-8)

    @pytest.mark.parametrize("make,args", [
        (gen.power, (3.5,)),
        (gen.exp_minus_one, (2.0,)),
        (gen.power_times_exp, (2.0, math.e)),
        (gen.cubic_rational, (3.0,)),
    ])
    def test_family_derivatives_match_expression_route(self, make, args):
        g = make(*args)
        texts = {
            "power": "t^3.5",
            "exp": "exp(0.6931471805599453*t)-1",
            "powexp": "t^2*exp(t)",
            "cubicrational": "t^3/(t+1)",
        }
        symbolic = gen.from_expression(texts[g.family[0]])
        for t in [0.3, 1.0, 4.2]:
            assert g.deriv1(t) == pytest.approx(symbolic.deriv1(t), rel=1e-12)
            assert g.deriv2(t) == pytest.approx(symbolic.deriv2(t), rel=1e-12)


class TestFamilySpec:
    def test_power_spec(self):
        g = gen.parse_family_spec("power:p=2")
        assert g.family == ("power", {"p": 2.0})

    def test_exp_decimal_and_e_literal(self):
        g1 = gen.parse_family_spec("exp:a=2.71828182845904523536")
        g2 = gen.parse_family_spec("exp:a=e")
        assert g1.family[1]["a"] == math.e
        assert g2.family[1]["a"] == math.e
        assert gen.is_exp_e(g1) and gen.is_exp_e(g2)

    def test_powexp_spec(self):
        g = gen.parse_family_spec("powexp:p=1,a=2")
        assert g.family == ("powexp", {"p": 1.0, "a": 2.0})

    def test_expr_spec(self):
        g = gen.parse_family_spec("expr:t^3/(t+1)")
        assert g.value(2.0) == pytest.approx(8 / 3)

    @pytest.mark.parametrize("bad", [
        "power", "power:p=", "power:q=2", "unknown:p=2", "exp:a=one",
        "expr:t^t",
    ])
    def test_malformed_specs(self, bad):
        with pytest.raises(gen.GeneratorError):
            gen.parse_family_spec(bad)

    def test_is_exp_e_negative(self):
        assert not gen.is_exp_e(gen.exp_minus_one(2.0))
        assert not gen.is_exp_e(gen.power(2))
