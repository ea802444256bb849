"""Analytic benchmark cases, error norms and convergence studies.

Coordinates are the periodic nodes x_j = -1 + j dx of [-1, 1)^d.  Every
closure takes a list of ``d`` coordinate arrays (and a time where relevant)
and broadcasts over them.
"""

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DegenerateNorm, DivergenceDetected
from .params import Discretization, PDEParams, synthesize
from .solver import grid_nodes, init_equilibrium, init_fourth_order, run, steps_for

INIT_SCHEMES = ("equilibrium", "fourth_order")


@dataclass(frozen=True)
class BenchmarkCase:
    name: str
    d: int
    pde: PDEParams
    phi0: object
    grad_phi0: object
    analytic: object
    domain: tuple = field(default=None)

    def __post_init__(self):
        if self.domain is None:
            object.__setattr__(self, "domain", ((-1.0, 1.0),) * self.d)

    def nodes(self, dx):
        (lo, hi), = set(self.domain)
        return grid_nodes(self.d, dx, lo, hi)


# hill value at the boundary is below 1e-10 of the peak
MAX_GAMMA0 = 1 / math.sqrt(2 * math.log(1e10))


def gauss_hill_case(d, kappa, gamma0=0.05):
    """Gaussian hill phi0 = phi_0/(2 pi sqrt(det G)) exp(-x.G^{-1}x / 2), G = gamma0^2 I + 2 diag(kappa) t.

    The total concentration is phi_0 = 2 pi gamma0.  The field is the free-space solution, so it
    matches the periodic problem on [-1, 1)^d only while the hill is negligible at the boundary.
    """
    kappa = tuple(float(k) for k in kappa)
    if len(kappa) != d:
        raise ConfigurationError(f"need {d} diffusion coefficients")
    if gamma0 > MAX_GAMMA0:
        warnings.warn(f"gamma0={gamma0} is wide for the periodic domain; periodic images will pollute errors",
                      UserWarning, stacklevel=2)
    total = 2 * math.pi * gamma0
    g2 = gamma0 ** 2

    def analytic(x, t):
        var = [g2 + 2 * k * np.asarray(t, dtype=float) for k in kappa]
        norm = total / (2 * math.pi * np.sqrt(math.prod(var)))
        return norm * np.exp(-0.5 * sum(xi * xi / v for xi, v in zip(x, var)))

    def phi0(x):
        return analytic(x, 0.0)

    def grad_phi0(x):
        p = phi0(x)
        return [-p * xi / g2 for xi in x]

    return BenchmarkCase(f"gauss_hill_{d}d", d, PDEParams(kappa), phi0, grad_phi0, analytic)


def sine_source_case(kappa_x, kappa_y):
    """phi = sin(pi x) sin(pi y) exp(-pi^2 (kx + ky + 1) t) + pi^2 with eta = -pi^2, S = pi^4."""
    pi = math.pi
    rate = pi ** 2 * (kappa_x + kappa_y + 1)

    def analytic(x, t):
        return np.sin(pi * x[0]) * np.sin(pi * x[1]) * np.exp(-rate * np.asarray(t, dtype=float)) + pi ** 2

    def phi0(x):
        return analytic(x, 0.0)

    def grad_phi0(x):
        return [pi * np.cos(pi * x[0]) * np.sin(pi * x[1]), pi * np.sin(pi * x[0]) * np.cos(pi * x[1])]

    pde = PDEParams((kappa_x, kappa_y), eta=-pi ** 2, source_const=pi ** 4)
    return BenchmarkCase("sine_source", 2, pde, phi0, grad_phi0, analytic)


def pde_residual(case, x, t, h=1e-3):
    """Central-difference residual d_t phi - sum kappa_i d_i^2 phi - eta phi - S of the analytic field."""
    x = [np.asarray(c, dtype=float) for c in x]
    f = case.analytic
    dt_phi = (f(x, t + h) - f(x, t - h)) / (2 * h)
    centre = f(x, t)
    lap = 0.0
    for i, k in enumerate(case.pde.kappa):
        xp = list(x); xp[i] = x[i] + h
        xm = list(x); xm[i] = x[i] - h
        lap = lap + k * (f(xp, t) - 2 * centre + f(xm, t)) / (h * h)
    return dt_phi - lap - case.pde.eta * centre - case.pde.source_const


def l2_error(numeric, analytic):
    """sqrt(sum (phi - phi*)^2 / sum phi*^2)."""
    numeric = np.asarray(numeric, dtype=float)
    analytic = np.asarray(analytic, dtype=float)
    if numeric.shape != analytic.shape:
        raise ValueError(f"shape mismatch {numeric.shape} vs {analytic.shape}")
    denom = float(np.sum(analytic * analytic))
    if denom == 0:
        raise DegenerateNorm("analytic field is identically zero")
    return math.sqrt(float(np.sum((numeric - analytic) ** 2)) / denom)


def model_factory(method="general", omega_tilde=None, s2_axis=None, branch=None, check=True):
    """Callable (pde, disc) -> ModelParams; re-solved for every discretization."""
    def make(pde, disc):
        return synthesize(pde, disc, method, omega_tilde, s2_axis, branch, check=check)
    return make


def initial_state(case, model, x, scheme):
    phi0 = case.phi0(x)
    if scheme == "equilibrium":
        return init_equilibrium(phi0, model)
    if scheme == "fourth_order":
        grad = case.grad_phi0(x) if case.grad_phi0 is not None else None
        return init_fourth_order(phi0, model, grad)
    raise ConfigurationError(f"unknown init scheme {scheme!r}; expected one of {INIT_SCHEMES}")


@dataclass(frozen=True)
class ConvergenceRow:
    dx: float
    dt: float
    l2: float
    rate: object  # float, or None where undefined

    @property
    def diverged(self):
        return math.isnan(self.l2)


def single_run(case, factory, dx, scaling_ratio, t_final, scheme):
    """Run one resolution; returns (dt, l2) with l2 = nan after divergence."""
    disc = Discretization.from_scaling(dx, scaling_ratio)
    model = factory(case.pde, disc)
    x = case.nodes(dx)
    state = initial_state(case, model, x, scheme)
    try:
        res = run(state, model, t_final=t_final)
    except DivergenceDetected:
        return disc.dt, math.nan
    err = l2_error(res.phi, case.analytic(x, res.time))
    return disc.dt, (err if math.isfinite(err) else math.nan)


def convergence_study(case, factory, dx_list, scaling_ratio, t_final, init_scheme="fourth_order", threads=None):
    """Errors and observed orders over a sequence of lattice spacings (diffusive scaling)."""
    dx_list = [float(v) for v in dx_list]
    if not dx_list:
        raise ConfigurationError("dx_list is empty")
    if any(b >= a for a, b in zip(dx_list, dx_list[1:])):
        raise ConfigurationError("dx_list must be strictly decreasing")
    for dx in dx_list:
        dt = scaling_ratio * dx * dx
        ratio = t_final / dt
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise ConfigurationError(f"t_final={t_final} is not a multiple of dt={dt} (dx={dx})")
        steps_for(t_final, dt)

    def job(dx):
        return single_run(case, factory, dx, scaling_ratio, t_final, init_scheme)

    if (threads or 1) > 1 and len(dx_list) > 1:
        with ThreadPoolExecutor(min(threads, len(dx_list))) as pool:
            results = list(pool.map(job, dx_list))
    else:
        results = [job(dx) for dx in dx_list]
    rows = []
    for k, (dx, (dt, err)) in enumerate(zip(dx_list, results)):
        rate = None
        if k > 0:
            prev = results[k - 1][1]
            if math.isfinite(prev) and math.isfinite(err) and err > 0 and prev > 0:
                rate = math.log(prev / err) / math.log(dx_list[k - 1] / dx)
        rows.append(ConvergenceRow(dx, dt, err, rate))
    return rows


def _fmt(v):
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "n/a"
    return f"{v:.17g}"


def write_convergence_csv(path_or_file, tables):
    """``tables`` maps init scheme -> rows; an ``init`` column is added when there are several."""
    own = isinstance(path_or_file, (str, os.PathLike))
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    multi = len(tables) > 1
    try:
        fh.write(("init," if multi else "") + "dx,dt,l2_error,rate\n")
        for scheme, rows in tables.items():
            for r in rows:
                lead = f"{scheme}," if multi else ""
                fh.write(f"{lead}{_fmt(r.dx)},{_fmt(r.dt)},{_fmt(r.l2)},{_fmt(r.rate)}\n")
    finally:
        if own:
            fh.close()
