import math

import mpmath
import pytest

from vcslab.frequencies import FrequencyConfig
from vcslab.moments import (
    MeasureDensity,
    density_for,
    moment_integral,
    moment_target,
    nonuniqueness_partner,
    probe_lattice,
    solve_generalized,
    verify_moments,
)
from vcslab.quadrature import (
    QuadSpec,
    QuadratureDisagreement,
    log_moment_adaptive,
    log_moment_gauss,
)
from vcslab.registry import get, registry
from vcslab.special import log_gamma
from vcslab.structure import SpecError

mpmath.mp.dps = 30

CFG2 = FrequencyConfig((1.0, 2.0))
CFG3 = FrequencyConfig((1.0, 2.0, 3.0))


class TestQuadraturePieces:
    @pytest.mark.parametrize("q", [0.0, 0.5, 3.0, 17.3, 41.25, 80.6])
    @pytest.mark.parametrize("log_s", [0.0, math.log(2.0), math.log(0.3)])
    def test_both_routes_hit_gamma(self, q, log_s):
        # int u^q e^(-u/S) du = Gamma(q+1) S^(q+1)
        expect = log_gamma(q + 1.0) + (q + 1.0) * log_s
        assert log_moment_gauss(q, log_s) == pytest.approx(expect, abs=5e-13 * max(1, abs(expect)))
        assert log_moment_adaptive(q, log_s) == pytest.approx(expect, abs=5e-11 * max(1, abs(expect)))

    def test_divergent_exponent_rejected(self):
        with pytest.raises(ValueError):
            log_moment_gauss(-1.0)
        with pytest.raises(ValueError):
            log_moment_adaptive(-1.5)


class TestDensityCatalog:
    def test_canonical_exponential_density(self):
        d = density_for(get("2d.1dof.plain1.A"), CFG2, (0,))
        # f(r, w1) = (1/w1) exp(-u/w1)
        assert d.log_const == pytest.approx(-math.log(1.0))
        assert d.power(1) == 0.0
        for u in (0.3, 1.0, 4.0):
            assert d.log_value({1: u}) == pytest.approx(-u / 1.0, abs=1e-12)

    def test_first_class_coupled_entry(self):
        # (1,1)C: rho1 = r2^(2 k2) f(r1 r2^k2, w1)
        d = density_for(get("2d.2dof.plain-plain.C"), CFG2, (2,))
        k2 = CFG2.ratio(2, 1)
        assert d.power(2) == pytest.approx(k2)
        u = {1: 0.7, 2: 1.9}
        expect = (
            k2 * math.log(u[2])
            - math.log(1.0) - math.log(2.0)
            - u[1] * u[2] ** k2 / 1.0
            - u[2] / 2.0
        )
        assert d.log_value(u) == pytest.approx(expect, abs=1e-12)

    def test_moment_integral_factorial_oracle(self):
        # plain class at n = 3, w = 1 -> 3! = 6
        cfg = FrequencyConfig((1.0, 1.0))
        spec = get("2d.1dof.plain1.A")
        val = moment_integral(spec, cfg, (0,), (3,))
        assert val.value == pytest.approx(6.0, rel=1e-10)

    def test_moment_integral_gamma_oracle(self):
        # deformed class with gamma = 1 + 0.5*3 = 2.5 at n1 = 2: Gamma(4.5)
        cfg = FrequencyConfig((1.0, 0.5))  # kappa12 = 0.5
        spec = get("2d.1dof.gamma1.A")
        val = moment_integral(spec, cfg, (3,), (2,))
        expect = float(mpmath.gamma(4.5))
        assert val.value == pytest.approx(expect, rel=1e-9)
        assert expect == pytest.approx(11.6317283966, rel=1e-9)

    def test_density_normalization_is_zeroth_moment(self):
        # n = 0 moment equals the zeroth factorial target (=1 for plain A)
        spec = get("2d.2dof.gamma1-gamma2.A")
        val = moment_integral(spec, CFG2, (1,), (0,))
        target = moment_target(spec, CFG2, (1,), (0,))
        assert val.rel_diff(target) < 1e-10


class TestVerifyMoments:
    def test_plain_class_full_range(self):
        rep = verify_moments(get("2d.1dof.plain1.A"), CFG2, (0,), n_range=20)
        assert rep.passed and rep.max_residual <= 1e-8

    @pytest.mark.parametrize(
        "cid,fixed",
        [
            ("2d.1dof.plain2.D", (3,)),
            ("2d.1dof.gamma1.B", (1,)),
            ("2d.1dof.gamma2.C", (3,)),
            ("2d.2dof.plain-plain.B", (1,)),
            ("2d.2dof.plain-plain.D", (3,)),
            ("2d.2dof.gamma1-plain.C", (2,)),
            ("2d.2dof.plain-gamma2.B", (3,)),
            ("2d.2dof.plain-gamma2.C", (1,)),
            ("2d.2dof.gamma1-gamma2.B", (2,)),
            ("2d.2dof.gamma1-gamma2.D", (1,)),
        ],
    )
    def test_two_dimensional_subclasses(self, cid, fixed):
        rep = verify_moments(get(cid), CFG2, fixed, n_range=12)
        assert rep.passed, rep.as_dict()

    @pytest.mark.parametrize(
        "cid",
        ["3d.2dof.gamma13-gamma32", "3d.2dof.gamma1-gamma2", "3d.3dof.max", "3d.3dof.min"],
    )
    def test_three_dimensional_classes(self, cid):
        rep = verify_moments(get(cid), CFG3, (1,), n_range=10)
        assert rep.passed, rep.as_dict()

    def test_doubly_deformed_class_against_gamma_targets(self):
        # spot oracle: (g1,g2)A 2D at n1 = 2, n2 = 3 target Gamma(g1+2)Gamma(g2+3)
        spec = get("2d.2dof.gamma1-gamma2.A")
        k1, k2 = CFG2.ratio(1, 2), CFG2.ratio(2, 1)
        val = moment_integral(spec, CFG2, (3,), (2,))
        expect = float(mpmath.gamma(1 + 3 * k1 + 2) * mpmath.gamma(1 + 2 * k2 + 3))
        assert val.value == pytest.approx(expect, rel=1e-9)

    def test_tampered_density_fails(self):
        spec = get("2d.1dof.plain1.A")
        good = density_for(spec, CFG2, (0,))
        bad = good.perturbed(1, 1.01)
        rep = verify_moments(spec, CFG2, (0,), n_range=12, density=bad)
        assert not rep.passed
        # residual grows roughly like n * 1%
        worst = rep.max_residual
        assert worst > 0.05

    def test_shifted_plain_class_moments(self):
        # target becomes w^n (1+alpha)_n; at n=2, alpha=1/2, w=1: 1.5*2.5
        cfg = FrequencyConfig((1.0, 1.0), shifts=(0.5, 0.5))
        spec = get("2d.1dof.plain1.A")
        val = moment_integral(spec, cfg, (0,), (2,))
        assert val.value == pytest.approx(3.75, rel=1e-10)
        rep = verify_moments(spec, cfg, (0,), n_range=15)
        assert rep.passed

    def test_shifted_smart_classes_still_pass(self):
        cfg = FrequencyConfig((1.0, 2.0, 3.0), shifts=(0.5, 0.25, 1.0))
        for cid in ("3d.2dof.gamma1-gamma2", "3d.3dof.min"):
            rep = verify_moments(get(cid), cfg, (2,), n_range=8)
            assert rep.passed, rep.as_dict()

    def test_variant_subclasses_reject_shifts(self):
        cfg = FrequencyConfig((1.0, 2.0), shifts=(0.5, 0.0))
        with pytest.raises(SpecError):
            verify_moments(get("2d.2dof.plain-plain.C"), cfg, (1,))


class TestSolveGeneralized:
    def test_plainplain_unit_tuple_gives_product_density(self):
        d = solve_generalized("PlainPlain", (1, 0, 1, 0, 1, 0, 1, 0), CFG2, 2)
        ref = density_for(get("2d.2dof.plain-plain.A"), CFG2, (2,))
        u = {1: 0.9, 2: 1.4}
        assert d.log_value(u) == pytest.approx(ref.log_value(u), abs=1e-12)

    def test_gammaplain_base_tuple_matches_catalog(self):
        d = solve_generalized("GammaPlain", (1, 1, 1, 1, 1, 0, 1, 0), CFG2, 3)
        ref = density_for(get("2d.2dof.gamma1-plain.A"), CFG2, (3,))
        for u in ({1: 0.5, 2: 0.8}, {1: 2.0, 2: 3.0}):
            assert d.log_value(u) == pytest.approx(ref.log_value(u), abs=1e-12)

    @pytest.mark.parametrize(
        "form,family",
        [
            ("PlainPlain", "plain-plain"),
            ("GammaPlain", "gamma1-plain"),
            ("PlainGamma", "plain-gamma2"),
            ("GammaGamma", "gamma1-gamma2"),
        ],
    )
    def test_every_registered_tuple_reproduces_catalog(self, form, family):
        for spec in registry():
            if spec.family != family or spec.dimension != 2:
                continue
            b1, b1p, b2, b2p = spec.quadruple
            d = solve_generalized(form, (1, b1, 1, b1p, 1, b2, 1, b2p), CFG2, 2)
            ref = density_for(spec, CFG2, (2,))
            for u in ({1: 0.5, 2: 0.8}, {1: 1.7, 2: 0.3}, {1: 3.1, 2: 2.2}):
                assert d.log_value(u) == pytest.approx(
                    ref.log_value(u), abs=1e-11
                ), (spec.id, d, ref)

    def test_zero_leading_exponent_rejected(self):
        with pytest.raises(SpecError):
            solve_generalized("PlainPlain", (0, 0, 1, 0, 1, 0, 1, 0), CFG2, 1)

    def test_nonunit_leading_exponents_solve_their_moment_problem(self):
        # direct verification of the generalized identity for a1 = 2:
        # int chi u1^(2 n1) u2^(n2) ... = n1! n2!  (b's all zero)
        from vcslab.moments import _integrate

        d = solve_generalized("PlainPlain", (2, 0, 1, 0, 1, 0, 1, 0), CFG2, 1)
        for n1, n2 in [(0, 0), (1, 2), (3, 1), (5, 4)]:
            log_i, _ = _integrate(d, {1: 2.0 * n1, 2: 1.0 * n2}, QuadSpec())
            log_i -= n1 * math.log(1.0) + n2 * math.log(2.0)
            expect = math.lgamma(n1 + 1) + math.lgamma(n2 + 1)
            assert log_i == pytest.approx(expect, abs=1e-9)


class TestNonUniqueness:
    def test_two_densities_same_moments(self):
        spec = get("2d.2dof.gamma1-plain.B")
        fixed = (2,)
        d1 = density_for(spec, CFG2, fixed)
        d2 = nonuniqueness_partner(spec, CFG2, fixed)
        rep1 = verify_moments(spec, CFG2, fixed, n_range=15, density=d1)
        rep2 = verify_moments(spec, CFG2, fixed, n_range=15, density=d2)
        assert rep1.passed and rep2.passed
        # genuinely different densities pointwise
        u = {1: 1.0, 2: 1.0}
        assert abs(d1.log_value(u) - d2.log_value(u)) > 0.1


class TestDeformationContinuity:
    def test_densities_deform_smoothly(self):
        # gamma-family one-variable density at kappa -> 0 approaches the
        # plain one pointwise (sup over r in [0, 10 sqrt(w)])
        spec_g = get("2d.1dof.gamma1.B")
        spec_p = get("2d.1dof.plain1.A")
        cfg_small = FrequencyConfig((1.0, 1e-8))  # kappa12 = 1e-8
        d_g = density_for(spec_g, cfg_small, (3,))
        d_p = density_for(spec_p, cfg_small, (3,))
        sup = 0.0
        for k in range(1, 101):
            u = (k / 100.0 * 10.0) ** 2
            diff = abs(math.exp(d_g.log_value({1: u})) - math.exp(d_p.log_value({1: u})))
            sup = max(sup, diff)
        assert sup <= 1e-6


class TestLattice:
    def test_probe_lattice_shapes(self):
        assert probe_lattice(1, 5) == [(n,) for n in range(6)]
        pts = probe_lattice(2, 20)
        assert (20, 20) in pts and (20, 0) in pts and (0, 20) in pts
        assert all(max(p) <= 20 for p in pts)
