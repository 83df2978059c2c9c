import math

import numpy as np
import pytest

from vcslab.frequencies import FrequencyConfig
from vcslab.moments import density_for, verify_moments
from vcslab.registry import get
from vcslab.resolution import (
    aliasing_solutions,
    gram_matrix,
    resolution_residual,
    selection_rule,
)

CFG2 = FrequencyConfig((1.0, 2.0))
CFG3 = FrequencyConfig((1.0, 2.0, 3.0))
CFG3_IRR = FrequencyConfig((1.0, math.sqrt(2.0), math.sqrt(5.0)))


class TestSelectionRule:
    def test_single_integer_phase(self):
        rule = selection_rule(get("2d.1dof.plain1.A"), CFG2)
        assert rule.constraints == ((1.0,),)
        assert rule.satisfied((0,)) and not rule.satisfied((1,))

    def test_doubly_deformed_constraint_pair(self):
        # both towers give proportional constraints d1 + k12 d2 = 0
        rule = selection_rule(get("3d.2dof.gamma1-gamma2"), CFG3)
        assert len(rule.constraints) == 1
        assert rule.equivalent_pairs  # the second phase is the equivalent form
        k12 = CFG3.ratio(1, 2)
        c = rule.constraints[0]
        assert c[0] == 1.0 and c[1] == pytest.approx(k12)

    def test_dependent_case13_single_constraint(self):
        rule = selection_rule(get("3d.2dof.gamma1-plain3"), CFG3)
        # z1 phases give d1 + k12 d2 = 0; z3 phase has no summed dependence
        assert len(rule.constraints) == 1

    def test_independent_class_diagonal_rule(self):
        rule = selection_rule(get("3d.2dof.gamma13-gamma23"), CFG3)
        assert len(rule.constraints) == 2
        assert rule.satisfied((0, 0)) and not rule.satisfied((1, 0)) and not rule.satisfied((0, 1))


class TestAliasing:
    def test_irrational_ratio_no_solutions(self):
        spec = get("3d.2dof.gamma1-gamma2")
        cfg = FrequencyConfig((1.0, math.sqrt(2.0), 3.0))  # k12 = sqrt(2)
        rule = selection_rule(spec, cfg)
        assert aliasing_solutions(rule, 50) == []

    def test_rational_ratio_small_denominator(self):
        spec = get("3d.2dof.gamma1-gamma2")
        cfg = FrequencyConfig((2.0, 1.0, 3.0))  # k12 = 1/2
        rule = selection_rule(spec, cfg)
        sols = aliasing_solutions(rule, 4)
        assert (1, -2) in sols and (-1, 2) in sols

    def test_zero_excluded_and_window_validated(self):
        rule = selection_rule(get("2d.1dof.plain1.A"), CFG2)
        assert all(any(d != 0 for d in s) for s in aliasing_solutions(rule, 3))
        with pytest.raises(ValueError):
            aliasing_solutions(rule, 0)

    def test_irrational_scan_up_to_100(self):
        spec = get("3d.2dof.gamma1-gamma2")
        cfg = FrequencyConfig((1.0, math.sqrt(2.0), 3.0))
        rule = selection_rule(spec, cfg)
        assert aliasing_solutions(rule, 100) == []


class TestResolutionResidual:
    def test_canonical_class_gram_is_identity(self):
        rep = resolution_residual(get("2d.1dof.plain1.A"), CFG2, (0,), 15)
        assert rep.passed
        assert rep.max_residual <= 1e-6

    def test_two_dof_class(self):
        rep = resolution_residual(get("2d.2dof.gamma1-plain.A"), CFG2, (2,), 12)
        assert rep.passed

    def test_diagonal_matches_moment_residuals(self):
        spec = get("2d.2dof.plain-gamma2.C")
        rep_r = resolution_residual(spec, CFG2, (1,), 8)
        rep_m = verify_moments(spec, CFG2, (1,), n_range=8)
        res_r = dict(rep_r.residuals)
        res_m = dict(rep_m.residuals)
        for n in range(9):
            assert res_r[f"G[{n}]"] == pytest.approx(res_m[str(n)], abs=1e-12)

    def test_wrong_density_drifts_monotonically(self):
        spec = get("2d.1dof.plain1.A")
        bad = density_for(spec, CFG2, (0,)).perturbed(1, 1.02)
        from vcslab.moments import moment_integral, moment_target

        drift = []
        for n in range(0, 12, 3):
            v = moment_integral(spec, CFG2, (0,), (n,), density=bad)
            t = moment_target(spec, CFG2, (0,), (n,))
            drift.append(v.rel_diff(t))
        assert drift == sorted(drift)
        assert drift[-1] > drift[0]

    def test_aliased_rational_pair_flagged(self):
        spec = get("3d.2dof.gamma1-gamma2")
        cfg = FrequencyConfig((2.0, 1.0, 3.0))  # k12 = 1/2: delta = (1,-2) aliases
        rep = resolution_residual(spec, cfg, (1,), (4, 4))
        meta = dict(rep.metadata)
        assert meta["aliasing_pairs"] > 0
        assert any("|" in k for k, _ in rep.residuals)

    def test_gram_matrix_psd_and_diagonal(self):
        spec = get("3d.2dof.gamma13-gamma23")
        g = gram_matrix(spec, CFG3_IRR, (1,), (3, 3))
        assert np.allclose(g, g.T)
        assert np.linalg.eigvalsh(g).min() >= -1e-12
        assert np.abs(np.diag(g) - 1.0).max() <= 1e-8
        off = g - np.diag(np.diag(g))
        assert np.abs(off).max() == 0.0


class TestIrrationalRatioSweep:
    @pytest.mark.parametrize("ratio", [math.sqrt(2.0), math.pi / 3.0])
    def test_aliasing_empty_up_to_100(self, ratio):
        cfg = FrequencyConfig((1.0, ratio, 3.0))
        rule = selection_rule(get("3d.2dof.gamma1-gamma2"), cfg)
        assert aliasing_solutions(rule, 100) == []


class TestTwoDimensionalDoublyDeformedRule:
    def test_equivalent_constraint_pair(self):
        # both variable phases constrain the single summed difference;
        # the two forms are proportional and collapse to one constraint
        rule = selection_rule(get("2d.2dof.gamma1-gamma2.A"), CFG2)
        assert len(rule.constraints) == 1
        assert rule.equivalent_pairs
        assert rule.satisfied((0,)) and not rule.satisfied((2,))
