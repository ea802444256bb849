import io
import math
import warnings

import numpy as np
import pytest

from conftest import table1_model, table2_model
from mrtlb.bench import gauss_hill_case, initial_state, l2_error
from mrtlb.errors import ConfigurationError, DegenerateSource, DivergenceDetected
from mrtlb.lattice import RelaxationSet, WeightSet, build_lattice
from mrtlb.params import Discretization, ModelParams, PDEParams, solve_model
from mrtlb.solver import (FieldState, central_gradient, collide, collide_population, grid_nodes,
                          init_equilibrium, init_fourth_order, macro_field, phi_of, run, step, steps_for, stream,
                          write_field_csv)


def _random_state(model, shape, seed=0):
    rng = np.random.default_rng(seed)
    return FieldState(rng.uniform(0.0, 1.0, (model.lattice.q,) + shape))


def test_macro_field_example():
    f = np.full((9, 1), 1 / 9)
    phi = macro_field(f, eta=-math.pi ** 2, source_const=math.pi ** 4, dt=0.01)
    assert phi[0] == pytest.approx((2 + 0.01 * math.pi ** 4) / (2 + 0.01 * math.pi ** 2), rel=1e-15)


def test_macro_field_plain_sum():
    f = np.arange(9.0).reshape(9, 1)
    assert macro_field(f)[0] == 36.0


def test_macro_field_degenerate():
    with pytest.raises(DegenerateSource):
        macro_field(np.ones((9, 2)), eta=2.0, dt=1.0)


def test_uniform_state_is_fixed(d2q9_model):
    state = init_equilibrium(np.full((8, 8), 3.7), d2q9_model)
    after = step(state, d2q9_model)
    assert np.abs(after.f - state.f).max() < 1e-14
    assert after.time_index == 1


@pytest.mark.parametrize("eps", [(0.40, 0.10), (0.10, 0.40, 0.15)])
def test_mass_conservation(eps):
    model = table1_model(eps)
    shape = (12,) * model.d
    state = _random_state(model, shape)
    total0 = state.f.sum()
    res = run(state, model, n_steps=100)
    assert abs(res.state.f.sum() - total0) / total0 < 1e-12


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("with_source", [False, True])
def test_collision_equivalence(d, with_source):
    rng = np.random.default_rng(d)
    lat = build_lattice(d)
    npair = d * (d - 1) // 2
    u = lambda n: tuple(rng.uniform(0.2, 1.8, n))
    rates = RelaxationSet(u(d), u(d), u(npair), u(2 * npair), u(npair), s0=1.0)
    weights = WeightSet(tuple(rng.uniform(0.02, 0.1, d)), 0.01 if d > 1 else 0.0)
    pde = PDEParams((0.1,) * d, eta=-2.0 if with_source else 0.0, source_const=3.0 if with_source else 0.0)
    model = ModelParams(lat, weights, rates, rates.s_axis, pde, Discretization(0.1, 0.01))
    f = rng.uniform(0.0, 1.0, (lat.q,) + (5,) * d)
    assert np.abs(collide(f, model) - collide_population(f, model)).max() < 1e-13


def test_stream_shifts(d2q9_model):
    f = np.zeros((9, 4, 4))
    f[:, 1, 2] = 1.0
    out = stream(f, d2q9_model.lattice.velocities)
    for k, e in enumerate(d2q9_model.lattice.velocities):
        assert out[k, (1 + e[0]) % 4, (2 + e[1]) % 4] == 1.0
        assert out[k].sum() == 1.0


def test_reflection_symmetry(d2q9_model):
    # reflecting x -> -x and every velocity e -> -e commutes with one step
    lat = d2q9_model.lattice
    opp = lat.opposite()
    state = _random_state(d2q9_model, (10, 10), seed=3)

    def reflect(f):
        g = f[opp]
        return np.roll(g[:, ::-1, ::-1], 1, axis=(1, 2))

    a = reflect(step(state, d2q9_model).f)
    b = step(FieldState(reflect(state.f)), d2q9_model).f
    assert np.abs(a - b).max() < 1e-14


def test_init_equilibrium_recovers_field(source_model):
    rng = np.random.default_rng(5)
    phi0 = rng.uniform(1.0, 2.0, (6, 6))
    state = init_equilibrium(phi0, source_model)
    assert np.abs(phi_of(state, source_model) - phi0).max() < 1e-14


def test_init_equilibrium_without_source(d2q9_model):
    state = init_equilibrium(np.ones((3, 3)), d2q9_model)
    w = d2q9_model.expanded_weights()
    assert np.allclose(state.f[:, 1, 1], w, atol=1e-16)


def test_fourth_order_init_zero_gradient(d2q9_model):
    phi0 = np.full((6, 6), 2.5)
    a = init_fourth_order(phi0, d2q9_model, [np.zeros((6, 6))] * 2)
    b = init_equilibrium(phi0, d2q9_model)
    assert np.abs(a.f - b.f).max() < 1e-15


def test_fourth_order_init_d1_linear_profile():
    # hand-built D1Q3 moment matrix and collision operator
    s1, s2, w1 = 1.3, 0.9, 1 / 6
    pde = PDEParams((0.1,))
    disc = Discretization(0.05, 0.01)
    model = ModelParams(build_lattice(1), WeightSet((w1,), 0.0), RelaxationSet((s1,), (s2,)), (s1,), pde, disc)
    vel = model.lattice.velocities[:, 0].astype(float)
    m = np.vstack([np.ones(3), vel, vel ** 2])
    lam = np.linalg.inv(m) @ np.diag([1.0, s1, s2]) @ m
    w = np.array([1 - 2 * w1, w1, w1])
    slope = 0.7
    phi0 = np.full(4, 1.0)
    got = init_fourth_order(phi0, model, [np.full(4, slope)])
    expected = w * 1.0 - disc.dx * np.linalg.solve(lam, w * vel * slope)
    assert np.allclose(got.f[:, 0], expected, atol=1e-15)


def test_central_gradient_fourth_order():
    errs = []
    for n in (32, 64):
        dx = 2 / n
        x = -1 + dx * np.arange(n)
        g = central_gradient(np.sin(np.pi * x), dx)[0]
        errs.append(np.abs(g - np.pi * np.cos(np.pi * x)).max())
    assert math.log2(errs[0] / errs[1]) == pytest.approx(4.0, abs=0.1)


def test_fourth_order_init_numeric_gradient(d2q9_model):
    x = grid_nodes(2, d2q9_model.disc.dx)
    phi0 = np.sin(np.pi * x[0]) * np.cos(np.pi * x[1])
    exact = [np.pi * np.cos(np.pi * x[0]) * np.cos(np.pi * x[1]), -np.pi * np.sin(np.pi * x[0]) * np.sin(np.pi * x[1])]
    model = d2q9_model
    a = init_fourth_order(phi0, model)
    b = init_fourth_order(phi0, model, exact)
    assert np.abs(a.f - b.f).max() < 1e-8


def test_fourth_order_init_accuracy_after_two_steps():
    case = gauss_hill_case(2, (0.3 / 250, 0.1 / 250))
    errs = []
    for dx in (1 / 50, 1 / 100):
        disc = Discretization.from_scaling(dx, 250)
        model = solve_model(case.pde, disc)
        x = case.nodes(dx)
        res = run(initial_state(case, model, x, "fourth_order"), model, n_steps=2)
        errs.append(l2_error(res.phi, case.analytic(x, res.time)))
    assert math.log2(errs[0] / errs[1]) > 3.8


def test_steps_for():
    assert steps_for(1.0, 0.01) == 100
    assert steps_for(0.0, 0.01) == 0
    with pytest.warns(UserWarning):
        assert steps_for(0.015, 0.01) == 1
    with pytest.raises(ConfigurationError):
        steps_for(-1.0, 0.1)


def test_run_zero_time_returns_initial(source_model):
    phi0 = np.random.default_rng(2).uniform(1, 2, (5, 5))
    res = run(init_equilibrium(phi0, source_model), source_model, t_final=0.0)
    assert res.steps == 0 and res.time == 0.0
    assert np.abs(res.phi - phi0).max() < 1e-14


def test_run_argument_validation(d2q9_model):
    state = init_equilibrium(np.ones((4, 4)), d2q9_model)
    with pytest.raises(ConfigurationError):
        run(state, d2q9_model)
    with pytest.raises(ConfigurationError):
        run(state, d2q9_model, t_final=1.0, n_steps=2)


def test_run_callback_count(d2q9_model):
    seen = []
    run(init_equilibrium(np.ones((4, 4)), d2q9_model), d2q9_model, n_steps=3, callback=lambda s: seen.append(s.time_index))
    assert seen == [1, 2, 3]


def test_divergence_detected(d2q9_model):
    bad = d2q9_model.with_weights(WeightSet((0.6, 0.6), 1 / 36))
    state = init_equilibrium(np.random.default_rng(0).random((8, 8)), bad)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        with np.errstate(all="ignore"):
            with pytest.raises(DivergenceDetected) as info:
                run(state, bad, n_steps=20000)
    assert info.value.step > 0
    assert len(info.value.cell) == 2


def test_grid_nodes():
    x, y = grid_nodes(2, 0.5)
    assert x.shape == (4, 4)
    assert np.allclose(x[:, 0], [-1.0, -0.5, 0.0, 0.5])
    assert np.allclose(y[0], [-1.0, -0.5, 0.0, 0.5])
    with pytest.raises(ConfigurationError):
        grid_nodes(2, 0.3)


def test_write_field_csv():
    buf = io.StringIO()
    write_field_csv(buf, np.array([[0.1, 0.2], [0.3, 0.4]]))
    lines = buf.getvalue().splitlines()
    assert lines[0] == "i1,i2,phi"
    assert lines[1] == "0,0,0.10000000000000001"
    assert len(lines) == 5


@pytest.mark.parametrize("source_const", [0.0, math.pi ** 4])
def test_uniform_source_update_is_trapezoidal(source_model, source_const):
    # a uniform field follows phi' = eta phi + S with the trapezoidal rule
    model = ModelParams(source_model.lattice, source_model.weights, source_model.rates, source_model.rates_tilde,
                        PDEParams(source_model.pde.kappa, source_model.pde.eta, source_const), source_model.disc)
    phi0 = np.full((4, 4), 2.0)
    res = run(init_equilibrium(phi0, model), model, n_steps=3)
    a, dt = model.pde.eta * model.disc.dt, model.disc.dt
    phi = 2.0
    for _ in range(3):
        phi = (phi * (1 + a / 2) + dt * source_const) / (1 - a / 2)
    assert np.allclose(res.phi, phi, rtol=1e-13)
    exact = (2.0 + source_const / model.pde.eta) * math.exp(3 * a) - source_const / model.pde.eta
    assert res.phi[0, 0] == pytest.approx(exact, rel=1e-4)
