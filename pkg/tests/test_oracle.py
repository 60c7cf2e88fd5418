import math

import numpy as np
import pytest

import paranorms as pn
from paranorms import modulus as mo
from paranorms import oracle as orc


@pytest.fixture
def euclid():
    return pn.ParanormContext(pn.power(2), pn.MeasureSpace((1.0, 1.0)))


@pytest.fixture
def exp_plane():
    return pn.ParanormContext(pn.exp_minus_one(), pn.MeasureSpace((1.0, 1.0)))


class TestArcMax:
    @pytest.mark.parametrize("r,eps", [(1.0, 0.5), (0.5, 0.3), (2.0, 1.1),
                                       (3.0, 0.2), (1.0, 1.2)])
    def test_matches_delta0(self, r, eps):
        res = orc.arc_max_exp(r, eps)
        assert res.delta_hat == pytest.approx(mo.delta0(r, eps), abs=1e-8)

    def test_argmax_at_endpoint_with_equal_endpoint_values(self):
        res = orc.arc_max_exp(1.0, 0.5)
        assert res.details["argmax_at_endpoint"]
        f1, f2 = res.details["endpoint_f"]
        assert f1 == pytest.approx(f2, rel=1e-12)  # max taken at both ends

    def test_interior_critical_point_is_strict_minimum(self):
        res = orc.arc_max_exp(1.0, 0.5)
        assert res.details["interior_min_gap"] > 0.0
        assert res.details["interior_f"] < min(res.details["endpoint_f"])

    def test_interior_point_lies_on_arc(self):
        res = orc.arc_max_exp(1.5, 0.8)
        rho, alpha = res.details["rho"], res.details["alpha"]
        s_c, t_c = res.details["interior_critical_point"]
        assert t_c / s_c + (rho - s_c) / (rho - t_c) == \
            pytest.approx(alpha, rel=1e-12)
        assert float(orc._arc_t_of_s(s_c, rho, alpha)) == \
            pytest.approx(t_c, rel=1e-10)

    def test_argmax_pair_on_constraint_set(self, exp_plane):
        res = orc.arc_max_exp(1.0, 0.7)
        x = np.asarray(res.argmax_x)
        y = np.asarray(res.argmax_y)
        assert pn.pnorm(exp_plane, x) == pytest.approx(1.0, abs=1e-9)
        assert pn.pnorm(exp_plane, y) == pytest.approx(1.0, abs=1e-9)
        assert pn.pnorm(exp_plane, x - y) == pytest.approx(0.7, abs=1e-9)

    def test_domain_validation(self):
        with pytest.raises(mo.DomainError):
            orc.arc_max_exp(0.5, 3.0)

    def test_worst_midpoint_below_radius(self):
        res = orc.arc_max_exp(2.0, 0.4)
        assert res.worst_midpoint < 2.0


class TestEmpiricalModulus:
    def test_euclid_near_tight(self, euclid):
        res = orc.empirical_modulus(euclid, 1.0, 1.0, 20000, seed=42)
        theory = 1.0 - math.sqrt(3) / 2.0
        assert res.delta_hat >= theory - 1e-6
        assert res.delta_hat <= theory + 1e-4   # extremals exist and are found
        assert not res.low_coverage

    def test_exp_lower_bounded_by_thm5(self, exp_plane):
        res = orc.empirical_modulus(exp_plane, 1.0, 1.0, 6000, seed=9)
        assert res.delta_hat >= mo.delta_thm5(1.0, 1.0) - 1e-9

    def test_bit_identical_given_seed(self, euclid):
        a = orc.empirical_modulus(euclid, 1.0, 0.8, 5000, seed=7)
        b = orc.empirical_modulus(euclid, 1.0, 0.8, 5000, seed=7)
        assert a.worst_midpoint == b.worst_midpoint
        assert a.argmax_x == b.argmax_x and a.argmax_y == b.argmax_y
        assert a.n_feasible == b.n_feasible

    def test_raw_max_monotone_in_samples(self, euclid):
        small = orc.empirical_modulus(euclid, 1.0, 0.8, 3000, seed=5,
                                      refine=False)
        large = orc.empirical_modulus(euclid, 1.0, 0.8, 12000, seed=5,
                                      refine=False)
        assert large.worst_midpoint >= small.worst_midpoint

    def test_refinement_never_decreases_tracked_max(self, euclid):
        res = orc.empirical_modulus(euclid, 1.0, 0.8, 5000, seed=3)
        assert res.worst_midpoint >= res.details["raw_best"]

    def test_argmax_revalidates(self, exp_plane):
        res = orc.empirical_modulus(exp_plane, 1.2, 0.9, 5000, seed=1)
        x, y = np.asarray(res.argmax_x), np.asarray(res.argmax_y)
        assert pn.pnorm(exp_plane, x) <= 1.2 + 1e-12
        assert pn.pnorm(exp_plane, y) <= 1.2 + 1e-12
        assert pn.pnorm(exp_plane, x - y) >= 0.9 - 1e-12

    def test_degenerate_eps_rejected(self, euclid):
        with pytest.raises(mo.DomainError):
            orc.empirical_modulus(euclid, 1.0, 2.0, 100, seed=0)

    def test_low_coverage_flagged(self, euclid):
        # eps close to 2r: feasible pairs are vanishingly rare
        res = orc.empirical_modulus(euclid, 1.0, 1.999, 300, seed=2)
        assert res.low_coverage

    def test_distinct_streams_differ(self, euclid):
        a = orc.empirical_modulus(euclid, 1.0, 0.8, 3000, seed=7, stream=0,
                                  refine=False)
        b = orc.empirical_modulus(euclid, 1.0, 0.8, 3000, seed=7, stream=1,
                                  refine=False)
        assert a.worst_midpoint != b.worst_midpoint

    def test_sphere_only_fast_mode(self, euclid):
        res = orc.empirical_modulus(euclid, 1.0, 1.0, 4000, seed=12,
                                    sphere_only=True)
        theory = 1.0 - math.sqrt(3) / 2.0
        assert res.delta_hat >= theory - 1e-6
        # every raw sample sits on the sphere, the extremal set for L^2
        assert res.delta_hat <= theory + 1e-4


class TestHigherDimensions:
    def test_three_dimensional_euclidean(self):
        ctx = pn.ParanormContext(pn.power(2), pn.MeasureSpace((1.0,) * 3))
        res = orc.empirical_modulus(ctx, 1.0, 1.0, 8000, seed=5)
        theory = mo.delta_eA(pn.power(2), 1.0, 1.0, certified=True)
        assert res.delta_hat >= theory - 1e-9
        assert len(res.argmax_x) == 3

    def test_numeric_inverse_generator_route(self):
        # rational generator: no closed inverse anywhere in the search
        g = pn.cubic_rational(3)
        ctx = pn.ParanormContext(g, pn.MeasureSpace((0.5, 0.25)))
        fn = lambda r, e: mo.delta_eA(g, r, e, certified=True)
        rep = orc.check_lower_bound(ctx, fn, [1.0, 1.6], [0.7],
                                    samples=3000, seed=31, label="eA")
        assert rep.violations == []
        assert all(row.delta_empirical >= row.delta_theory - 1e-9
                   for row in rep.rows)


class TestLowerBound:
    def test_euclid_no_violations(self, euclid):
        fn = lambda r, e: mo.delta_eA(pn.power(2), r, e, certified=True)
        rep = orc.check_lower_bound(euclid, fn, [0.8, 1.3], [0.5, 1.0],
                                    samples=4000, seed=11, label="eA")
        assert rep.violations == []
        assert len(rep.rows) == 4
        for row in rep.rows:
            assert row.delta_empirical >= row.delta_theory - 1e-9

    def test_negative_control_finds_violations(self, euclid):
        fn = lambda r, e: 1.5 * mo.delta_eA(pn.power(2), r, e, certified=True)
        rep = orc.check_lower_bound(euclid, fn, [0.8, 1.3], [0.5, 1.0],
                                    samples=4000, seed=11, label="eA-x1.5")
        assert len(rep.violations) >= 1
        for row in rep.violations:
            assert row.witness_x is not None and row.witness_y is not None

    def test_skips_pairs_outside_delta(self, euclid):
        fn = lambda r, e: mo.delta_eA(pn.power(2), r, e, certified=True)
        rep = orc.check_lower_bound(euclid, fn, [0.5], [0.4, 1.5],
                                    samples=500, seed=0)
        assert [(row.r, row.eps) for row in rep.rows] == [(0.5, 0.4)]
