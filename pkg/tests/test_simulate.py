import math

import numpy as np
import pytest

import tvdecay as tv
from tvdecay.errors import (
    CFLWarning,
    LowerBoundViolated,
    NotADensity,
    WrongMeasure,
)
from tvdecay.measures import (
    eigen_perturbation,
    shifted_gaussian_density,
    step_density,
    tail_ratio_density,
)
from tvdecay.simulate import contraction_check, reverse_diagnostics
from tvdecay._numerics import fit_log_slope
from conftest import random_density


class TestSimConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            tv.SimConfig(dt=-1.0, t_end=1.0)
        with pytest.raises(ValueError):
            tv.SimConfig(dt=0.1, t_end=0.05)
        with pytest.raises(ValueError):
            tv.SimConfig(dt=0.1, t_end=1.0, save_every=0)
        with pytest.raises(ValueError):
            tv.SimConfig(dt=0.1, t_end=1.0, scheme="leapfrog")


class TestStationarity:
    def test_equilibrium_is_fixed(self, gaussian_measure):
        # the discrete generator annihilates constants identically
        cfg = tv.SimConfig(dt=1e-2, t_end=0.5, save_every=10)
        s = tv.evolve(gaussian_measure, np.ones(4001), cfg, keep_states=True)
        assert np.max(np.abs(s.states[-1] - 1.0)) < 1e-12
        assert np.all(s.tv < 1e-12)
        assert np.all(np.abs(s.variance) < 1e-12)


class TestConservation:
    def test_mass_conserved(self, gaussian_measure):
        rng = np.random.default_rng(61)
        h0 = random_density(gaussian_measure, rng)
        cfg = tv.SimConfig(dt=1e-3, t_end=1.0, save_every=100)
        s = tv.evolve(gaussian_measure, h0, cfg)
        assert np.max(np.abs(s.mass - 1.0)) < 1e-8

    def test_positivity_exact(self, gaussian_measure):
        # implicit Euler is an M-matrix scheme: h >= 0 exactly
        h0 = step_density(gaussian_measure)
        cfg = tv.SimConfig(dt=5e-3, t_end=0.5, save_every=20)
        s = tv.evolve(gaussian_measure, h0, cfg)
        assert np.all(s.min_h >= -1e-15)

    def test_non_density_rejected(self, gaussian_measure):
        cfg = tv.SimConfig(dt=1e-3, t_end=0.1)
        with pytest.raises(NotADensity):
            tv.evolve(gaussian_measure, np.full(4001, 2.0), cfg)


class TestSpectralRates:
    def test_variance_rate_eigenmode(self, gaussian_measure):
        # P_t x = e^{-t} x under L = (1/2) d^2 - x d, so Var decays at 2
        h0 = eigen_perturbation(gaussian_measure, 0.2)
        cfg = tv.SimConfig(dt=1e-3, t_end=2.0, save_every=50)
        s = tv.evolve(gaussian_measure, h0, cfg)
        w = (s.times >= 0.5) & (s.times <= 2.0)
        slope = fit_log_slope(s.times[w], s.variance[w])
        assert slope == pytest.approx(-2.0, abs=0.04)


class TestDissipation:
    def test_identity_quadratic_psi(self, gaussian_measure, psi_centered):
        # d/dt I_psi = -(1/2) int psi''(h) |h'|^2 dmu at interior saves
        h0 = eigen_perturbation(gaussian_measure, 0.2)
        cfg = tv.SimConfig(dt=1e-3, t_end=2.0, save_every=50)
        s = tv.evolve(gaussian_measure, h0, cfg, psi=psi_centered)
        inner = slice(2, -2)
        lhs = s.dissipation_lhs[inner]
        rhs = s.dissipation_rhs[inner]
        assert np.all(np.abs(lhs + rhs) <= 0.02 * np.abs(rhs) + 1e-8)


class TestMonotoneFunctionals:
    def test_all_functionals_non_increasing(self, gaussian_measure,
                                            psi_quad_spliced):
        rng = np.random.default_rng(67)
        shapes = [
            step_density(gaussian_measure),
            eigen_perturbation(gaussian_measure, 0.25),
            tail_ratio_density(gaussian_measure, 1.0)[0],
            random_density(gaussian_measure, rng, smooth=False),
        ]
        cfg = tv.SimConfig(dt=2e-3, t_end=1.0, save_every=50)
        for h0 in shapes:
            s = tv.evolve(gaussian_measure, h0, cfg, psi=psi_quad_spliced)
            for name in ("tv", "hellinger", "variance", "entropy", "i_psi",
                         "v_reverse", "e_reverse"):
                col = getattr(s, name)
                assert np.all(np.diff(col) <= 1e-6), (name, np.diff(col).max())

    def test_sandwich_along_flow(self, gaussian_measure):
        h0 = step_density(gaussian_measure)
        cfg = tv.SimConfig(dt=2e-3, t_end=1.0, save_every=100)
        s = tv.evolve(gaussian_measure, h0, cfg)
        assert np.all(s.hellinger <= 2.0 * s.tv + 1e-9)
        assert np.all(2.0 * s.tv <= 4.0 * np.sqrt(s.hellinger) + 1e-9)


class TestOuExactEvolve:
    def test_requires_gaussian(self, exponential_measure):
        h0 = step_density(exponential_measure)
        with pytest.raises(WrongMeasure):
            tv.ou_exact_evolve(exponential_measure, h0, 1.0)

    def test_long_time_equilibrium(self, gaussian_measure):
        h0 = step_density(gaussian_measure)
        out = tv.ou_exact_evolve(gaussian_measure, h0, 20.0)
        assert tv.integrate(gaussian_measure, np.abs(out - 1.0)) < 1e-8

    def test_short_time_identity(self, gaussian_measure):
        h0 = shifted_gaussian_density(gaussian_measure, 0.5)
        out = tv.ou_exact_evolve(gaussian_measure, h0, 1e-4)
        err = tv.integrate(gaussian_measure, np.abs(out - h0))
        assert err < 1e-2

    def test_eigenmode_decay(self, gaussian_measure):
        # P_t(1 + eps x) = 1 + eps e^{-t} x, exactly
        mu = gaussian_measure
        eps = 0.1
        h0 = 1.0 + eps * mu.grid
        h0 = h0 / tv.integrate(mu, h0)
        t = 0.7
        out = tv.ou_exact_evolve(mu, h0, t)
        expected = 1.0 + eps * math.exp(-t) * mu.grid
        err = tv.integrate(mu, np.abs(out - expected))
        assert err < 1e-7

    def test_step_tv_closed_form(self, gaussian_measure):
        # P_t sign(x) = erf(q x/sqrt(1-q^2)) gives
        # TV(t) = (2/pi) arctan(q/sqrt(1-q^2)), q = e^{-t}
        mu = gaussian_measure
        h0 = step_density(mu)
        prev = tv.tv_distance(mu, h0)
        for t in (0.1, 0.5, 1.0, 2.0):
            out = tv.ou_exact_evolve(mu, h0, t)
            q = math.exp(-t)
            expected = (2.0 / math.pi) * math.atan(q / math.sqrt(1.0 - q * q))
            measured = tv.tv_distance(mu, out)
            assert measured == pytest.approx(expected, abs=3e-3)
            assert measured < prev  # strictly decreasing sequence
            prev = measured


class TestSchemeAccuracy:
    def test_grid_convergence_crank_nicolson(self):
        # halving dx and dt cuts the kernel error by at least 3x
        # (second-order scheme on a smooth shape)
        errs = {}
        for n, dt in ((2001, 2e-3), (4001, 1e-3)):
            mu = tv.build_measure(tv.PotentialSpec.gaussian(), n)
            h0 = shifted_gaussian_density(mu, 0.5)
            cfg = tv.SimConfig(dt=dt, t_end=0.5, scheme="crank_nicolson",
                               save_every=10 ** 9)
            s = tv.evolve(mu, h0, cfg, keep_states=True)
            exact = tv.ou_exact_evolve(mu, h0, 0.5)
            errs[n] = tv.integrate(mu, np.abs(s.states[-1] - exact))
        assert errs[2001] / errs[4001] >= 3.0

    def test_cfl_warning_crank_nicolson(self, gaussian_measure):
        # a single-cell spike is under-resolved at this dt and oscillates
        mu = gaussian_measure
        h0 = np.zeros(4001)
        h0[2000] = 1.0
        h0 = h0 / tv.integrate(mu, h0)
        cfg = tv.SimConfig(dt=5e-2, t_end=0.5, scheme="crank_nicolson",
                           save_every=10)
        with pytest.warns(CFLWarning):
            tv.evolve(mu, h0, cfg)


class TestReverseDiagnostics:
    def test_flat_at_equilibrium(self, gaussian_measure):
        cfg = tv.SimConfig(dt=1e-2, t_end=0.3, save_every=10)
        s = tv.evolve(gaussian_measure, np.ones(4001), cfg)
        rd = reverse_diagnostics(s)
        assert np.max(np.abs(rd.V)) < 1e-12
        assert np.max(np.abs(rd.E)) < 1e-12
        assert rd.v_monotone and rd.e_monotone

    def test_monotone_and_tv_bounds(self, gaussian_measure):
        # V, E non-increasing and TV <= sqrt(V), TV <= sqrt(2E) per save;
        # these hold for the (1+h)/2 mixture flow with its own TV
        h0 = step_density(gaussian_measure)
        cfg = tv.SimConfig(dt=2e-3, t_end=1.5, save_every=50)
        s = tv.evolve(gaussian_measure, h0, cfg)
        rd = reverse_diagnostics(s)
        assert rd.v_monotone and rd.e_monotone
        assert s.reverse_transformed
        mix_tv = 0.5 * s.tv  # TV of the mixture flow is half the raw TV
        assert np.all(mix_tv <= np.sqrt(rd.V) + 1e-9)
        assert np.all(mix_tv <= np.sqrt(2.0 * rd.E) + 1e-9)

    def test_direct_when_minorized(self, gaussian_measure):
        rng = np.random.default_rng(71)
        h0 = 0.5 * (1.0 + random_density(gaussian_measure, rng))
        cfg = tv.SimConfig(dt=2e-3, t_end=0.5, save_every=50)
        s = tv.evolve(gaussian_measure, h0, cfg)
        assert not s.reverse_transformed
        rd = reverse_diagnostics(s)
        assert np.all(s.tv <= np.sqrt(rd.V) + 1e-9)
        assert np.all(s.tv <= np.sqrt(2.0 * rd.E) + 1e-9)

    def test_lower_bound_violation_detected(self, gaussian_measure):
        rng = np.random.default_rng(73)
        h0 = 0.5 * (1.0 + random_density(gaussian_measure, rng))
        cfg = tv.SimConfig(dt=2e-3, t_end=0.2, save_every=50)
        s = tv.evolve(gaussian_measure, h0, cfg)
        s.min_h = s.min_h.copy()
        s.min_h[-1] = 0.4  # doctored state simulating a solver defect
        with pytest.raises(LowerBoundViolated):
            reverse_diagnostics(s)


class TestContraction:
    def test_identical_densities(self, gaussian_measure):
        h0 = step_density(gaussian_measure)
        cfg = tv.SimConfig(dt=2e-3, t_end=0.3, save_every=30)
        res = contraction_check(gaussian_measure, h0, h0.copy(), cfg)
        assert res["violations"] == 0
        assert np.max(res["l1_distance"]) < 1e-12

    def test_random_mixtures(self, gaussian_measure):
        rng = np.random.default_rng(79)
        cfg = tv.SimConfig(dt=2e-3, t_end=0.5, save_every=25)
        for _ in range(3):
            h0 = random_density(gaussian_measure, rng)
            g0 = random_density(gaussian_measure, rng, smooth=False)
            res = contraction_check(gaussian_measure, h0, g0, cfg)
            assert res["violations"] == 0

    def test_against_equilibrium_is_tv(self, gaussian_measure):
        h0 = step_density(gaussian_measure)
        cfg = tv.SimConfig(dt=2e-3, t_end=0.4, save_every=20)
        res = contraction_check(gaussian_measure, h0, np.ones(4001), cfg)
        s = tv.evolve(gaussian_measure, h0, cfg)
        assert np.allclose(res["l1_distance"], s.tv, atol=1e-12)
