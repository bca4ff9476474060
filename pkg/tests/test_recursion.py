import numpy as np
import pytest

from maxsat.errors import ConstructionError, DomainError, NonConvergenceError, ShapeError
from maxsat.recursion import (
    CoupledProfile,
    CouplingSpec,
    IterationConfig,
    apply_A,
    apply_At,
    copy_midpoint_tail,
    coupled_fixed_point,
    coupled_step,
    enumerate_fixed_points,
    make_system,
    midpoint_index,
    modified_coupled_fixed_point,
    translate_system,
    uncoupled_fixed_point,
    uncoupled_step,
)
from maxsat.potential import U_s
from maxsat.systems import example1_system, example2_system, pathological_system

# largest fixed point of x = 0.97 (1-(1-x)^2)^2, frozen from a bisection on
# x - h(x) over [0.9, 1] (the oracle is repeated below in test_enumerate)
EX1_FP_MID = 0.4054778834818118
EX1_FP_TOP = 0.9680165035778856


def brute_force_step(sys_, spec, x):
    """Direct double-sum evaluation of the coupled update."""
    N, w, M = spec.N, spec.w, spec.M
    y = [float(sys_.g(float(v))) for v in x]
    out = np.zeros(M)
    for i in range(1, M + 1):
        acc = 0.0
        for j in range(1, N + 1):
            if 1 <= i - j + 1 <= w:
                inner = 0.0
                for k in range(1, M + 1):
                    if 1 <= k - j + 1 <= w:
                        inner += y[k - 1] / w
                acc += float(sys_.f(inner)) / w
        out[i - 1] = acc
    return out


class TestUncoupled:
    def test_step_values(self):
        s = example1_system()
        assert uncoupled_step(s, 0.0) == 0.0
        assert uncoupled_step(s, 1.0) == pytest.approx(0.97, abs=1e-15)
        assert uncoupled_step(s, 0.5) == pytest.approx(0.545625, abs=1e-15)

    def test_step_domain(self):
        s = example1_system()
        with pytest.raises(DomainError):
            uncoupled_step(s, 1.5)
        with pytest.raises(DomainError):
            uncoupled_step(s, -0.1)

    def test_fixed_point_from_below_unstable(self):
        s = example1_system()
        x, _ = uncoupled_fixed_point(s, 0.05)
        # oracle: direct iteration
        z = 0.05
        for _ in range(10000):
            z = float(s.h(z))
        assert abs(x - z) <= 1e-10
        assert x <= 1e-9

    def test_fixed_point_from_xmax(self):
        s = example1_system()
        x, iters = uncoupled_fixed_point(s, 1.0)
        assert x == pytest.approx(EX1_FP_TOP, abs=1e-9)
        assert iters >= 1

    def test_fixed_point_input_returns_fast(self):
        s = example1_system()
        x, iters = uncoupled_fixed_point(s, EX1_FP_TOP)
        assert iters == 1
        assert abs(x - EX1_FP_TOP) <= 1e-10

    def test_monotone_from_xmax(self):
        for s in (example1_system(), example2_system(), pathological_system()):
            x = s.x_max
            for _ in range(300):
                xn = float(s.h(x))
                assert xn <= x + 1e-15
                x = xn

    def test_nonconvergence_carries_last(self):
        s = example1_system()
        with pytest.raises(NonConvergenceError) as exc:
            uncoupled_fixed_point(s, 1.0, IterationConfig(tol=1e-12, max_iters=3))
        assert 0.0 < exc.value.last <= 1.0
        assert exc.value.iters == 3


class TestCouplingOperators:
    def test_apply_A_ones(self):
        spec = CouplingSpec(2, 2)
        assert np.allclose(apply_A(spec, [1.0, 1.0, 1.0]), [1.0, 1.0])

    def test_apply_At_boundary(self):
        spec = CouplingSpec(2, 2)
        assert np.allclose(apply_At(spec, [1.0, 1.0]), [0.5, 1.0, 0.5])

    def test_apply_A_values(self):
        spec = CouplingSpec(2, 2)
        assert np.allclose(apply_A(spec, [0.2, 0.4, 0.6]), [0.3, 0.5])

    def test_shape_errors(self):
        spec = CouplingSpec(2, 2)
        with pytest.raises(ShapeError):
            apply_A(spec, [1.0, 1.0])
        with pytest.raises(ShapeError):
            apply_At(spec, [1.0, 1.0, 1.0])

    def test_spec_validation(self):
        with pytest.raises(ConstructionError):
            CouplingSpec(0, 2)
        with pytest.raises(ConstructionError):
            IterationConfig(tol=-1.0)


class TestCoupledStep:
    def test_zero_stays_zero(self):
        s = example1_system()
        spec = CouplingSpec(5, 3)
        prof = CoupledProfile(np.zeros(spec.M), spec)
        assert np.all(coupled_step(s, prof).values == 0.0)

    @pytest.mark.parametrize("N,w", [(2, 2), (3, 2), (4, 3), (2, 3), (4, 2)])
    def test_matches_brute_force(self, N, w):
        s = example1_system()
        spec = CouplingSpec(N, w)
        rng = np.random.default_rng(100 * N + w)
        for _ in range(5):
            x = rng.uniform(0.0, 1.0, spec.M)
            ours = coupled_step(s, CoupledProfile(x, spec)).values
            ref = brute_force_step(s, spec, x)
            assert np.max(np.abs(ours - ref)) <= 1e-15

    def test_w1_reduces_to_uncoupled(self):
        s = example2_system()
        spec = CouplingSpec(6, 1)
        rng = np.random.default_rng(0)
        x = rng.uniform(0.0, 1.0, spec.M)
        ours = coupled_step(s, CoupledProfile(x, spec)).values
        ref = uncoupled_step(s, x)
        assert np.array_equal(ours, ref)


class TestCoupledFixedPoint:
    def test_w1_profile_is_uncoupled_fp(self):
        s = example1_system()
        run = coupled_fixed_point(s, CouplingSpec(7, 1))
        ref, _ = uncoupled_fixed_point(s, s.x_max)
        assert np.max(np.abs(run.profile.values - ref)) <= 1e-9

    def test_collapse_at_moderate_width(self):
        s = example1_system()
        run = coupled_fixed_point(s, CouplingSpec(64, 8))
        assert run.profile.max <= 1e-6

    def test_iterates_monotone_symmetric_unimodal(self):
        s = example1_system()
        run = coupled_fixed_point(s, CouplingSpec(16, 3),
                                  IterationConfig(record_trajectory=True))
        traj = run.trajectory
        assert len(traj) == run.iters + 1
        i0 = midpoint_index(run.profile.spec.M)
        for prev, cur in zip(traj, traj[1:]):
            assert np.all(cur <= prev + 1e-15)
            assert np.max(np.abs(cur - cur[::-1])) <= 1e-12
            assert np.min(np.diff(cur[:i0 + 1])) >= -1e-12

    def test_nonconvergence_carries_profile(self):
        s = example1_system()
        with pytest.raises(NonConvergenceError) as exc:
            coupled_fixed_point(s, CouplingSpec(16, 3),
                                IterationConfig(max_iters=2))
        assert isinstance(exc.value.last, CoupledProfile)


class TestModifiedRecursion:
    def test_tail_copy(self):
        # midpoint of M=4 is position 2 (1-based)
        out = copy_midpoint_tail(np.array([0.1, 0.3, 0.2, 0.05]))
        assert np.allclose(out, [0.1, 0.3, 0.3, 0.3])

    def test_zero_stays_zero(self):
        s = example1_system()
        run = modified_coupled_fixed_point(s, CouplingSpec(9, 2),
                                           IterationConfig(max_iters=10**4))
        assert run.profile.max >= 0.0

    def test_dominates_plain_recursion(self):
        s = example1_system()
        spec = CouplingSpec(9, 2)
        kcfg = IterationConfig(record_trajectory=True, max_iters=10**5)
        plain = coupled_fixed_point(s, spec, kcfg)
        mod = modified_coupled_fixed_point(s, spec, kcfg)
        assert np.all(mod.profile.values >= plain.profile.values - 1e-12)
        for a, b in zip(plain.trajectory, mod.trajectory):
            assert np.all(b >= a - 1e-12)
        # modified iterates are non-decreasing along the chain
        for v in mod.trajectory:
            assert np.min(np.diff(v)) >= -1e-12


class TestTranslate:
    def test_identity_at_zero(self):
        s = example1_system()
        t = translate_system(s, 0.0)
        xs = np.linspace(0, 1, 17)
        assert np.allclose(t.h(xs), s.h(xs), atol=1e-15)
        assert np.allclose(U_s(t, xs), U_s(s, xs), atol=1e-15)

    def test_potential_shift_identity(self):
        s = example1_system()
        t = translate_system(s, EX1_FP_TOP)
        xs = np.linspace(0, t.x_max, 33)
        ref = U_s(s, xs + EX1_FP_TOP) - U_s(s, EX1_FP_TOP)
        assert np.max(np.abs(U_s(t, xs) - ref)) <= 1e-12

    def test_translated_zero_is_fixed_point(self):
        s = example1_system()
        t = translate_system(s, EX1_FP_TOP)
        assert abs(t.h(0.0)) <= 1e-10
        assert t.x_max == pytest.approx(1.0 - EX1_FP_TOP)

    def test_requires_fixed_point(self):
        s = example1_system()
        with pytest.raises(DomainError):
            translate_system(s, 0.5)

    def test_shift_identity_with_nonzero_g_origin(self):
        # the fixed-up antiderivatives keep the potential identity even when
        # g(0) != 0 after translation bookkeeping
        s = example2_system()
        top, _ = uncoupled_fixed_point(s, s.x_max)
        t = translate_system(s, top)
        xs = np.linspace(0, t.x_max, 21)
        ref = U_s(s, xs + top) - U_s(s, top)
        assert np.max(np.abs(np.asarray(U_s(t, xs)) - ref)) <= 1e-12
        assert abs(t.h(0.0)) <= 1e-9


class TestEnumerate:
    def test_example1_three_fixed_points(self):
        s = example1_system()
        pts = enumerate_fixed_points(s)
        # oracle: fine scan of x - h(x) plus bisection on each sign change
        xs = np.linspace(0, 1, 10**6 + 1)
        d = xs - np.asarray(s.h(xs))
        changes = np.where(d[:-1] * d[1:] < 0)[0]
        assert len(pts) == len(changes) + 1  # +1 for the exact root at 0
        assert pts[0] == 0.0
        assert pts[1] == pytest.approx(EX1_FP_MID, abs=1e-9)
        assert pts[2] == pytest.approx(EX1_FP_TOP, abs=1e-9)

    def test_grid_n_validation(self):
        with pytest.raises(DomainError):
            enumerate_fixed_points(example1_system(), grid_n=1)

    def test_pathological_accumulation(self):
        s = pathological_system()
        pts = [x for x in enumerate_fixed_points(s, 200000) if 0.01 <= x <= 0.1]
        assert len(pts) >= 5

    def test_tangential_root_flagged(self):
        # h(x) - x = -x (x - 1/2)^2 / 2 grazes zero at 1/2 without a sign
        # change; bisection cannot bracket it, the |d| refinement finds it
        k = 0.5
        s = make_system(f=lambda x: x * (1.0 - k * (x - 0.5) ** 2),
                        g=lambda x: 1.0 * x, x_max=1.0,
                        f_prime=lambda x: 1.0 - k * ((x - 0.5) ** 2 + 2 * x * (x - 0.5)),
                        g_prime=lambda x: 1.0 + 0.0 * x,
                        g_second=lambda x: 0.0 * x)
        pts = enumerate_fixed_points(s, with_flags=True)
        assert (0.0, False) == pts[0]
        tang = [x for x, flag in pts if flag]
        assert len(tang) == 1
        assert tang[0] == pytest.approx(0.5, abs=1e-4)


def test_make_system_rejects_decreasing_g():
    with pytest.raises(ConstructionError):
        make_system(f=lambda y: y, g=lambda x: -x + 1.0, x_max=1.0)


def test_make_system_fd_and_quadrature_fallbacks():
    ref = example1_system()
    bare = make_system(f=ref.f, g=ref.g, x_max=1.0)
    xs = np.linspace(0.0, 1.0, 9)
    assert np.max(np.abs(np.asarray(bare.F(xs)) - np.asarray(ref.F(xs)))) <= 1e-9
    assert np.max(np.abs(np.asarray(bare.G(xs)) - np.asarray(ref.G(xs)))) <= 1e-9
    mid = xs[1:-1]
    assert np.max(np.abs(np.asarray(bare.f_prime(mid)) - np.asarray(ref.f_prime(mid)))) <= 1e-6
    assert np.max(np.abs(np.asarray(bare.g_prime(mid)) - np.asarray(ref.g_prime(mid)))) <= 1e-6
