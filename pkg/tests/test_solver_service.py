# tests/test_solver_service.py
import cmath
import math

import pytest

from models.field import GridSpec
from models.seed import SeedSpec
from models.solve import Outcome, SolverConfig
from services.seed_service import SeedService
from services.solver_service import SolverService
from utils.exceptions import SolverError, UnsupportedFamilyError
from utils.lambert_w import lambert_w0_over_x

EPS_LAMBDA = -0.29412 + 1.04401j
EPS_W0 = 1.08824 - 0.31320j
EPS_JAC = 0.91844 - 0.02098j

def seed_residual(spec, lam, x, y):
    return abs(lam - SeedService.eval_seed(spec, y - lam * x).value)

class TestClosedForms:
    def test_delta_value(self, delta_seed):
        result = SolverService.solve(delta_seed, 1, 2)
        assert abs(result.lam - (1 + 0.5j)) < 1e-15
        assert abs(result.w0 - (1 - 0.5j)) < 1e-15
        assert result.jac == 2
        assert result.status.outcome == Outcome.CONVERGED

    def test_delta_near_shock_still_inside(self, delta_seed):
        result = SolverService.solve(delta_seed, -0.99, 0)
        assert abs(result.lam - 100j) < 1e-9 * 100
        assert result.status.converged

    def test_delta_shock(self, delta_seed):
        with pytest.raises(SolverError) as info:
            SolverService.solve(delta_seed, -1.0, 0)
        assert info.value.outcome == Outcome.SHOCK

    def test_epsilon_reference_point(self, eps_seed):
        result = SolverService.solve(eps_seed, 0.3, 1)
        assert abs(result.lam - EPS_LAMBDA) < 1e-5
        assert abs(result.w0 - EPS_W0) < 1e-5
        assert abs(result.jac - EPS_JAC) < 1e-5
        assert seed_residual(eps_seed, result.lam, 0.3, 1) < 1e-13

    def test_epsilon_ellipticity_loss(self, eps_seed):
        with pytest.raises(SolverError) as info:
            SolverService.solve(eps_seed, 1, 3.5)
        assert info.value.outcome == Outcome.ELLIPTICITY_LOSS

    def test_epsilon_beyond_vertex(self, eps_seed):
        with pytest.raises(SolverError) as info:
            SolverService.solve(eps_seed, 2.1, 0)
        assert info.value.outcome == Outcome.ELLIPTICITY_LOSS

    def test_epsilon_vertex_is_shock(self, eps_seed):
        with pytest.raises(SolverError) as info:
            SolverService.solve(eps_seed, 2, 0)
        assert info.value.outcome == Outcome.SHOCK

    @pytest.mark.parametrize("x, y", [(3, 1), (3, -5), (2, 1), (2.5, 0)])
    def test_epsilon_right_of_vertex_loses_ellipticity(self, eps_seed, x, y):
        with pytest.raises(SolverError) as info:
            SolverService.solve(eps_seed, x, y)
        assert info.value.outcome == Outcome.ELLIPTICITY_LOSS

    def test_epsilon_seed_cut_on_initial_slice(self, eps_seed):
        with pytest.raises(SolverError) as info:
            SolverService.solve(eps_seed, 0, 5)
        assert info.value.outcome == Outcome.OUTSIDE_SEED_DOMAIN

    def test_epsilon_axis_jacobian(self, eps_seed):
        assert abs(SolverService.jacobian_closed_form(eps_seed, 1, 0) - 2 / 3) < 1e-15
        assert abs(SolverService.solve(eps_seed, 1, 0).jac - 2 / 3) < 1e-15

    def test_initial_slice_recovers_seed(self, exp_seed):
        result = SolverService.solve(exp_seed, 0, 0)
        assert result.lam == 1j
        assert result.method == "initial_slice"

    def test_exponential_reflection(self, exp_seed):
        right = SolverService.solve(exp_seed, 1, 0).lam
        left = SolverService.solve(exp_seed, -1, 0).lam
        assert abs(left + right.conjugate()) < 1e-13

    @pytest.mark.parametrize("x, y", [(1, 0), (-3, 2), (10, -4), (0.01, 5), (50, -3)])
    def test_exponential_jacobian_never_small(self, exp_seed, x, y):
        result = SolverService.solve(exp_seed, x, y)
        assert abs(result.jac) >= 1 - 1e-12
        assert result.lam.imag > 0

    @pytest.mark.parametrize("x, y", [(1, 800), (-1, 800), (1e-300, 800), (2, 1000)])
    def test_exponential_past_exp_overflow(self, exp_seed, x, y):
        result = SolverService.solve(exp_seed, x, y)
        assert result.status.converged
        assert result.lam.imag > 0
        assert abs(result.jac) >= 1 - 1e-12
        # lambda = i exp(y - lambda x), compared through logarithms
        assert abs(cmath.log(result.lam) - (1j * math.pi / 2 + y - result.lam * x)) < 1e-10

    def test_exponential_initial_slice_overflow_is_a_status(self, exp_seed):
        with pytest.raises(SolverError) as info:
            SolverService.solve(exp_seed, 0, 800)
        assert info.value.outcome == Outcome.NON_CONVERGENCE

    @pytest.mark.parametrize("x, y", [(0.1, 0), (1, 0), (-2, 0.5), (0.25, 1), (3, -2), (1e-9, 0.3)])
    def test_cauchy_solves_its_equation(self, cauchy_seed, x, y):
        result = SolverService.solve(cauchy_seed, x, y)
        assert result.lam.imag > 0
        assert seed_residual(cauchy_seed, result.lam, x, y) < 1e-12 * (1 + abs(result.lam))
        assert abs(result.jac - SolverService.jacobian(cauchy_seed, result.lam, x, y)) < 1e-10

    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 8.0])
    def test_cauchy_axis_beyond_shock(self, cauchy_seed, x):
        lam = SolverService.solve(cauchy_seed, x, 0).lam
        assert abs(abs(lam) ** 2 - 1 / x) < 1e-13

    def test_cauchy_closed_form_shock(self, cauchy_seed):
        with pytest.raises(SolverError) as info:
            SolverService.solve_closed_form(cauchy_seed, 0.25, 0)
        assert info.value.outcome == Outcome.SHOCK
        assert abs(info.value.lam - 2j) < 1e-15

    @pytest.mark.parametrize("x, y", [(0.2, 0.5), (-0.7, 1.2), (1.5, -0.4)])
    def test_quadratic_jacobian_is_the_root(self, x, y):
        spec = SeedSpec.quadratic(0.5)
        result = SolverService.solve(spec, x, y)
        assert seed_residual(spec, result.lam, x, y) < 1e-12 * (1 + abs(result.lam))
        assert abs(result.jac - SolverService.jacobian(spec, result.lam, x, y)) < 1e-12

    def test_closed_form_refuses_non_holomorphic(self, nonholo_seed):
        with pytest.raises(UnsupportedFamilyError):
            SolverService.solve_closed_form(nonholo_seed, 0.1, 0)

class TestCharacteristics:
    def test_coordinate(self):
        assert SolverService.characteristic_coordinate(1j, 0, 3) == 3
        assert SolverService.characteristic_coordinate(1 + 0.5j, 1, 2) == 1 - 0.5j

    def test_delta_jacobian(self, delta_seed):
        assert SolverService.jacobian(delta_seed, 5j, 0.5, 1) == 1.5

    def test_epsilon_jacobian(self, eps_seed):
        lam = SolverService.solve(eps_seed, 0.3, 1).lam
        assert abs(SolverService.jacobian(eps_seed, lam, 0.3, 1) - EPS_JAC) < 1e-5

class TestNewton:
    def test_affine_converges_in_one_step(self, delta_seed):
        result = SolverService.solve_newton(delta_seed, 1, 2, 2 + 1j)
        assert abs(result.lam - (1 + 0.5j)) < 1e-14
        assert result.iterations == 1

    def test_epsilon_matches_closed_form(self, eps_seed):
        start = SeedService.eval_seed(eps_seed, 1).value
        newton = SolverService.solve_newton(eps_seed, 0.3, 1, start)
        assert abs(newton.lam - SolverService.solve(eps_seed, 0.3, 1).lam) < 1e-12

    def test_rejects_lower_half_plane_start(self, delta_seed):
        with pytest.raises(ValueError):
            SolverService.newton_evaluator(lambda w: SeedService.eval_seed(delta_seed, w), 1, 2, -1j)

    def test_iteration_budget(self, exp_seed):
        cfg = SolverConfig(max_newton_iters=1)
        with pytest.raises(SolverError) as info:
            SolverService.solve_newton(exp_seed, 0.5, 0, 1j, cfg)
        assert info.value.outcome == Outcome.NON_CONVERGENCE

class TestContinuation:
    def test_exponential_matches_lambert(self, exp_seed):
        result = SolverService.solve_continuation(exp_seed, 2, 0)
        assert abs(result.lam - lambert_w0_over_x(2, 0)) < 1e-12
        assert result.method == "continuation"

    @pytest.mark.parametrize("x, y", [(0.5, 0.3), (-0.6, 2.0), (3.0, -1.0)])
    def test_delta_routes_agree(self, delta_seed, x, y):
        closed = SolverService.solve_closed_form(delta_seed, x, y).lam
        newton = SolverService.solve_newton(delta_seed, x, y, 1j).lam
        marched = SolverService.solve_continuation(delta_seed, x, y).lam
        assert abs(closed - newton) < 1e-10
        assert abs(closed - marched) < 1e-10

    def test_cauchy_shock_point(self, cauchy_seed):
        with pytest.raises(SolverError) as info:
            SolverService.solve_continuation(cauchy_seed, 0.25, 0)
        assert info.value.outcome == Outcome.SHOCK
        assert abs(info.value.lam - 2j) < 1e-8

    def test_delta_reports_shock_and_progress(self, delta_seed):
        with pytest.raises(SolverError) as info:
            SolverService.solve_continuation(delta_seed, -1.0, 0)
        assert info.value.outcome == Outcome.SHOCK
        assert -1.0 <= info.value.x_reached <= 0

    def test_non_holomorphic_inside_slab(self, nonholo_seed):
        result = SolverService.solve(nonholo_seed, 0.3, 0.5)
        assert result.status.converged
        assert seed_residual(nonholo_seed, result.lam, 0.3, 0.5) < 1e-12
        # |J| reported for the real-linear map d -> a d + b conj(d)
        a, b = 1 + 0.3, 0.2 * 0.3
        assert abs(result.status.jacobian_modulus - math.sqrt(a * a - b * b)) < 1e-12

    def test_non_holomorphic_outside_slab(self, nonholo_seed):
        with pytest.raises(UnsupportedFamilyError):
            SolverService.solve(nonholo_seed, 0.6, 0)

    @pytest.mark.parametrize("spec, grid", [
        (SeedSpec.epsilon(0.5), GridSpec(-1.0, 1.0, -1.0, 1.0, 5, 5)),
        (SeedSpec.constant(2.0), GridSpec(-3.0, 3.0, -3.0, 3.0, 4, 4)),
        (SeedSpec.exponential(), GridSpec(-2.0, 2.0, -1.0, 1.0, 5, 5)),
    ])
    def test_closed_form_matches_continuation(self, spec, grid):
        for x, y in grid.nodes():
            closed = SolverService.solve_closed_form(spec, x, y).lam
            marched = SolverService.solve_continuation(spec, x, y).lam
            assert abs(closed - marched) < 1e-10 * (1 + abs(closed))

class TestDeltaGrid:
    GRID = GridSpec(-0.9, 3.0, -3.0, 3.0, 50, 50)

    def test_three_routes_agree(self, delta_seed):
        for x, y in self.GRID.nodes():
            closed = SolverService.solve_closed_form(delta_seed, x, y).lam
            newton = SolverService.solve_newton(delta_seed, x, y, complex(y, 1)).lam
            marched = SolverService.solve_continuation(delta_seed, x, y).lam
            assert abs(closed - newton) < 1e-10
            assert abs(closed - marched) < 1e-10

    def test_matches_rational_formula(self, delta_seed):
        for x, y in self.GRID.nodes():
            lam = SolverService.solve(delta_seed, x, y).lam
            assert abs(lam - complex(y, 1) / (1 + x)) < 1e-12 * abs(lam)
