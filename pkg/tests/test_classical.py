"""Tests for ultra-boost kinematics, dispersion laws and ray tracing."""
from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.interpolate import CubicSpline

from carrollsch import (
    PhysicalConstants,
    PotentialSpec,
    TwoMomentum,
    carroll_dispersion,
    carroll_relation_residual,
    energy_from_velocity,
    group_velocity,
    momentum_from_velocity,
    picard_iterate,
    schrodinger_relation_residual,
    separable_action,
    trace_ray,
    ultra_boost,
    ultra_boost_inverse,
)

finite = st.floats(-10.0, 10.0, allow_nan=False)


class TestUltraBoost:
    @settings(max_examples=25, deadline=None)
    @given(finite, finite, finite, finite)
    def test_invariant_preserved(self, er, ei, pr, pi):
        p = TwoMomentum(E=complex(er, ei), P=complex(pr, pi))
        assert ultra_boost(p).invariant() == p.invariant()

    @settings(max_examples=25, deadline=None)
    @given(finite, finite)
    def test_inverse_composition(self, e, pmom):
        p = TwoMomentum(E=complex(e), P=complex(pmom))
        q = ultra_boost_inverse(ultra_boost(p))
        assert q.E == p.E and q.P == p.P

    def test_exchanges_components(self):
        p = TwoMomentum(E=3.0, P=2.0)
        b = ultra_boost(p)
        assert b.E == -2.0j and b.P == -3.0j

    def test_shell_mapping(self):
        # a boosted pair on the quadratic shell pulls back to the linear one
        for pmom in (0.3, 1.0, 2.7):
            shell = TwoMomentum(E=pmom**2 / 2.0, P=pmom)
            assert schrodinger_relation_residual(shell) == 0.0
            back = ultra_boost_inverse(shell)
            assert abs(carroll_relation_residual(back)) <= 1e-14

    def test_nontrivial_constants(self):
        consts = PhysicalConstants(hbar=1.0, m=2.0, c=1.5)
        p = TwoMomentum(E=complex(1.2, -0.3), P=complex(0.4, 0.8))
        drift = abs(ultra_boost(p, consts).invariant(consts) - p.invariant(consts))
        assert drift <= 1e-14


class TestDispersion:
    def test_energy_momentum_relation(self):
        for p0 in (0.3, 1.0, 2.7):
            e0 = carroll_dispersion(p0)
            assert e0**2 / 2.0 == pytest.approx(p0, rel=1e-14)

    def test_sign_branch(self):
        assert carroll_dispersion(1.0, -1) == -carroll_dispersion(1.0, +1)

    def test_negative_momentum_rejected(self):
        with pytest.raises(ValueError):
            carroll_dispersion(-1.0)

    def test_velocity_laws_consistent(self):
        for p0 in (0.3, 1.0, 2.7):
            v = group_velocity(p0)
            assert momentum_from_velocity(v) == pytest.approx(p0, rel=1e-12)
            assert energy_from_velocity(v) == pytest.approx(
                carroll_dispersion(p0), rel=1e-12
            )

    def test_zero_velocity_rejected(self):
        with pytest.raises(ValueError):
            momentum_from_velocity(0.0)


class TestSeparableAction:
    def test_solves_the_flow_equation(self):
        s = separable_action(1.3, +1, 0.5)
        assert s.hj_residual(0.7, -0.2) <= 1e-14

    def test_plane_values(self):
        s = separable_action(1.0, +1, 0.0)
        e0 = carroll_dispersion(1.0)
        assert s(2.0, 3.0) == pytest.approx(-2.0 + 3.0 * e0)


class TestTraceRay:
    def test_linear_potential_closed_form(self):
        v = PotentialSpec.space_profile(lambda x: x, lambda x: np.ones_like(x))
        ray = trace_ray(v, 0.0, 0.0, 0.0, 1.0, 256)
        np.testing.assert_allclose(ray.t, -ray.x**2 / 2.0, atol=1e-10)
        np.testing.assert_allclose(ray.q, ray.x, atol=1e-10)

    def test_constraint_identically_zero(self):
        v = PotentialSpec.space_profile(np.sin, np.cos)
        ray = trace_ray(v, 0.0, 0.3, 0.5, 2.0, 128)
        assert ray.constraint_residual() == 0.0

    def test_too_few_steps_rejected(self):
        with pytest.raises(ValueError):
            trace_ray(PotentialSpec.zero(), 0.0, 0.0, 0.0, 1.0, 8)

    def test_nonfinite_gradient_rejected(self):
        v = PotentialSpec.space_profile(lambda x: 1.0 / x, lambda x: -1.0 / x**2)
        with np.errstate(divide="ignore"), pytest.raises(ValueError):
            trace_ray(v, -0.5, 0.0, 0.0, 0.5, 64)


class TestPicard:
    def test_free_line_is_iterate_zero(self):
        xs, its = picard_iterate(PotentialSpec.zero(), 0.0, 0.2, 0.5, 2.0, 1)
        np.testing.assert_allclose(its[0], 0.2 - 0.5 * xs, atol=1e-14)

    def test_space_only_fixed_point(self):
        v = PotentialSpec.space_profile(np.sin, np.cos)
        xs, its = picard_iterate(v, 0.0, 0.0, 0.3, 2.0, 3, n_samples=512)
        # the gradient does not depend on t, so the first sweep is stationary
        assert np.array_equal(its[1], its[2])
        assert np.array_equal(its[2], its[3])
        ref = -(0.3 * xs + 1.0 - np.cos(xs))
        np.testing.assert_allclose(its[1], ref, atol=1e-4)

    def test_separable_coupling_quadratic_convergence(self):
        # after one sweep the error is second order in the coupling strength
        errs = []
        for alpha in (0.2, 0.1):
            v = PotentialSpec.separable(
                lambda x, a=alpha: a * x, np.sin, da=lambda x, a=alpha: a * np.ones_like(x)
            )
            ray = trace_ray(v, 0.0, 0.5, 0.3, 2.0, 4096)
            xs, its = picard_iterate(v, 0.0, 0.5, 0.3, 2.0, 1, n_samples=512)
            t_ref = CubicSpline(ray.x, ray.t)(xs)
            errs.append(np.max(np.abs(its[1] - t_ref)))
        assert 3.0 <= errs[0] / errs[1] <= 5.0
