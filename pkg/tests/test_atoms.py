"""Atomic measure families and their transforms, evaluated in log-space."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, seed, strategies as st

from tauberlab import weights
from tauberlab.atoms import (
    LogComplex,
    atoms_outside_region,
    build_family,
    default_t_grid,
    default_z_samples,
    green_G,
    laplace_L,
    primitive_N,
    roots_identity,
    stirling_bounds_check,
    taylor_remainder_check,
    verify_prop52,
)

CANCEL_TOL = 1e-25
BACKEND_TOL = 1e-10
ROOTS_TOL = 1e-12
DERIV_TOL = 1e-6


def _unit_disc_z(draw_re, draw_im):
    z = complex(draw_re, draw_im)
    return z / max(1.0, abs(z))


# ----------------------------------------------------------------------
# build_family
# ----------------------------------------------------------------------

class TestBuildFamily:
    def test_fourth_root_of_unity(self):
        fam = build_family("power", 4, 2.0, 2.0)
        q = cmath.exp(2j * math.pi / fam.k)
        assert q == pytest.approx(1j, abs=1e-15)

    def test_circle_scale_formula(self):
        fam = build_family("power", 10, 2.0, 2.0)
        assert fam.circle_scale == pytest.approx(20.0 * math.log(10.0), rel=1e-14)

    def test_height_solves_budget_equation(self):
        # gamma defaults to (beta - alpha/2)/2 = 0.5 here
        fam = build_family("power", 10, 2.0, 2.0)
        assert fam.gamma == pytest.approx(0.5)
        H = fam.height
        assert abs(0.5 * H * H * math.log(H) - 10.0) <= 1e-10

    def test_log_variant_base_formula(self):
        fam = build_family("log", 16, 1.0)
        H = fam.height
        assert H == pytest.approx(math.exp(16.0 ** 0.5), rel=1e-12)
        assert fam.base == pytest.approx(1j * H - 1.0 - 2.0 / math.log(H), rel=1e-12)

    def test_small_k_rejected(self):
        with pytest.raises(ValueError):
            build_family("power", 2, 2.0, 2.0)

    def test_exponent_window_rejected(self):
        with pytest.raises(ValueError):
            build_family("power", 10, 2.0, 1.0)

    @pytest.mark.parametrize("variant,k,alpha,beta", [
        ("power", 8, 2.0, 2.0),
        ("power", 24, 1.0, 1.0),
        ("log", 20, 1.0, None),
    ])
    def test_atoms_sit_outside_resolvent_region(self, variant, k, alpha, beta):
        assert atoms_outside_region(build_family(variant, k, alpha, beta))


# ----------------------------------------------------------------------
# LogComplex plumbing
# ----------------------------------------------------------------------

class TestLogComplex:
    def test_round_trip(self):
        z = 3.5 - 1.25j
        assert LogComplex.from_complex(z).to_complex() == pytest.approx(z, rel=1e-15)

    def test_zero_encoding(self):
        assert LogComplex.zero().is_zero()
        assert LogComplex.zero().to_complex() == 0.0

    @seed(11)
    @given(
        st.floats(min_value=-50.0, max_value=50.0),
        st.floats(min_value=-math.pi, max_value=math.pi),
        st.floats(min_value=-50.0, max_value=50.0),
        st.floats(min_value=-math.pi, max_value=math.pi),
    )
    def test_multiplication_adds_logs(self, m1, p1, m2, p2):
        a = LogComplex.from_log(m1, p1)
        b = LogComplex.from_log(m2, p2)
        direct = a.to_complex() * b.to_complex()
        assert (a * b).to_complex() == pytest.approx(direct, rel=1e-12, abs=1e-280)


# ----------------------------------------------------------------------
# transforms
# ----------------------------------------------------------------------

class TestTransforms:
    def test_time_signal_vanishes_at_zero(self):
        for k in (3, 7, 15):
            fam = build_family("power", k, 2.0, 2.0)
            assert abs(laplace_L(fam, 0.0, backend="oracle")) <= CANCEL_TOL

    def test_primitive_vanishes_at_zero(self):
        for k in (3, 9):
            fam = build_family("power", k, 2.0, 2.0)
            assert abs(primitive_N(fam, 0.0, backend="oracle")) <= CANCEL_TOL

    @pytest.mark.parametrize("t", [1.0, 5.0, 10.0])
    def test_series_matches_oracle(self, t):
        fam = build_family("power", 5, 2.0, 2.0)
        s = laplace_L(fam, t, backend="series")
        o = laplace_L(fam, t, backend="oracle")
        assert abs(s - o) / max(abs(o), 1e-30) <= BACKEND_TOL

    def test_series_matches_oracle_across_k(self):
        for k in (8, 17, 30):
            fam = build_family("power", k, 2.0, 2.0)
            for t in (0.5 * k, 1.0 * k, 1.7 * k):
                s = primitive_N(fam, t, backend="series")
                o = primitive_N(fam, t, backend="oracle")
                assert abs(s - o) / max(abs(o), 1e-30) <= BACKEND_TOL

    def test_derivative_of_primitive_is_signal(self):
        fam = build_family("power", 10, 2.0, 2.0)
        h = 1e-4
        for t in (6.0, 10.0, 14.0):
            fd = (primitive_N(fam, t + h) - primitive_N(fam, t - h)) / (2.0 * h)
            ref = laplace_L(fam, t)
            assert abs(fd - ref) / max(abs(ref), 1e-12) <= DERIV_TOL

    def test_moving_resolvent_transform_finite_on_samples(self):
        fam = build_family("power", 10, 2.0, 2.0)
        M = weights.PowerRate(1.0, fam.alpha)
        for z in default_z_samples(fam, n=8):
            assert weights.omega_m_contains(M, complex(z))
            val = green_G(fam, 5.0, complex(z))
            assert np.isfinite(val.real) and np.isfinite(val.imag)

    def test_moving_resolvent_backends_agree(self):
        fam = build_family("power", 9, 2.0, 2.0)
        z = 0.5 + 4.0j
        s = green_G(fam, 3.0, z, backend="series")
        o = green_G(fam, 3.0, z, backend="oracle")
        assert abs(s - o) / max(abs(o), 1e-30) <= BACKEND_TOL


# ----------------------------------------------------------------------
# roots_identity
# ----------------------------------------------------------------------

class TestRootsIdentity:
    def test_single_term_case(self):
        lhs, rhs = roots_identity(1, 1, 3.0 + 0.0j)
        assert lhs == pytest.approx(0.5, abs=1e-15)
        assert rhs == pytest.approx(0.5, abs=1e-15)

    def test_small_case_closed_form(self):
        _, rhs = roots_identity(4, 2, 2.0 + 0.0j)
        assert rhs == pytest.approx(8.0 / 15.0, rel=1e-15)

    def test_pole_rejected(self):
        with pytest.raises(ZeroDivisionError):
            roots_identity(6, 2, 1.0 + 0.0j)

    @seed(5)
    @given(st.floats(min_value=0.0, max_value=2.0 * math.pi))
    def test_circle_samples_match(self, theta):
        z = 2.0 * cmath.exp(1j * theta)
        lhs, rhs = roots_identity(16, 5, z)
        assert abs(lhs - rhs) / max(abs(rhs), 1e-30) <= ROOTS_TOL


# ----------------------------------------------------------------------
# taylor_remainder_check
# ----------------------------------------------------------------------

class TestTaylorRemainder:
    def test_origin_is_exact(self):
        remainder, bound = taylor_remainder_check(3, 0.0 + 0.0j)
        assert remainder == 0.0
        assert bound == 0.0

    def test_unit_point_cubic(self):
        remainder, bound = taylor_remainder_check(3, 1.0 + 0.0j)
        assert remainder == pytest.approx(math.e - 8.0 / 3.0, rel=1e-12)
        assert bound == pytest.approx(2.0 / 24.0, rel=1e-15)
        assert remainder <= bound

    def test_outside_disc_rejected(self):
        with pytest.raises(ValueError):
            taylor_remainder_check(2, 1.5 + 0.0j)

    @seed(6)
    @given(
        st.floats(min_value=-1.0, max_value=1.0),
        st.floats(min_value=-1.0, max_value=1.0),
        st.integers(min_value=1, max_value=10),
    )
    def test_random_disc_points(self, re, im, n):
        z = _unit_disc_z(re, im)
        remainder, bound = taylor_remainder_check(n, z)
        assert remainder <= bound + 1e-18


# ----------------------------------------------------------------------
# stirling_bounds_check
# ----------------------------------------------------------------------

class TestStirlingBounds:
    def test_peak_value_is_one(self):
        k = 12
        t = float(k)
        peak = math.exp(k - t) * (t / k) ** k * max(math.sqrt(t / k), 1.0)
        assert peak == 1.0

    @pytest.mark.parametrize("k", [3, 10, 50])
    def test_single_constant_pair_per_k(self, k):
        # default grid is logarithmic on [0, 10k] and pins t = k exactly
        rep = stirling_bounds_check(k)
        assert rep.passed
        assert rep.constants["C"] > 0
        assert rep.constants["rho"] > 0
        assert rep.constants["c"] > 0


# ----------------------------------------------------------------------
# verify_prop52
# ----------------------------------------------------------------------

class TestInequalityFits:
    def test_power_variant_all_four_pass(self):
        fam = build_family("power", 15, 2.0, 2.0)
        reps = verify_prop52(fam)
        assert [r.name for r in reps] == ["X3", "XQ4", "X5", "X6"]
        assert all(r.passed for r in reps)
        assert all(r.constants.get("rho", 1.0) > 0 for r in reps)

    def test_power_variant_window_inside_grid(self):
        fam = build_family("power", 20, 2.0, 2.0)
        grid = default_t_grid(fam)
        k = fam.k
        window = grid[(grid - k) ** 2 < k]
        assert window.size >= 10  # the near-peak window must be sampled

    def test_log_variant_far_field_envelope(self):
        fam = build_family("log", 30, 1.0)
        reps = {r.name: r for r in verify_prop52(fam)}
        far = reps["Y4"]
        assert far.passed
        assert far.constants["rho"] > 0

    def test_oracle_backend_agrees_with_series_verdicts(self):
        fam = build_family("power", 12, 2.0, 2.0)
        tg = default_t_grid(fam, n=60)
        zs = default_z_samples(fam, n=10)
        series = verify_prop52(fam, t_grid=tg, z_samples=zs)
        oracle = verify_prop52(fam, t_grid=tg, z_samples=zs, backend="oracle")
        assert [r.passed for r in series] == [r.passed for r in oracle]
