"""MRT lattice Boltzmann evolution on a periodic d-dimensional grid.

Populations are stored as an array of shape ``(q, n_1, ..., n_d)``.  One
step is: macroscopic recovery, collision in moment space, transform back,
pull-streaming with periodic wrap.
"""

import math
import os
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DegenerateSource, DivergenceDetected
from .lattice import expand_relaxation
from .linalg import lu_invert


@dataclass
class FieldState:
    f: np.ndarray
    time_index: int = 0

    @property
    def shape(self):
        return self.f.shape[1:]

    @property
    def q(self):
        return self.f.shape[0]

    def copy(self):
        return FieldState(self.f.copy(), self.time_index)


def macro_field(f, eta=0.0, source_const=0.0, dt=1.0):
    """phi = (2 sum_k f_k + dt S) / (2 - dt eta); ``f`` has the population index first."""
    a = eta * dt
    if a == 2:
        raise DegenerateSource("dt * eta = 2 makes the macroscopic recovery singular")
    total = np.sum(f, axis=0)
    return (2 * total + dt * source_const) / (2 - a)


def phi_of(state, model):
    pde = model.pde
    return macro_field(state.f, pde.eta, pde.source_const, model.disc.dt)


def moment_profiles(model):
    """M w: moments of the equilibrium (and of the source distribution) per unit phi."""
    m_w = model.lattice.M @ model.expanded_weights()
    return m_w, m_w.copy()


def collide(f, model):
    """Post-collision populations, computed in moment space."""
    lat = model.lattice
    pde, dt = model.pde, model.disc.dt
    q = lat.q
    flat = f.reshape(q, -1)
    phi = macro_field(flat, pde.eta, pde.source_const, dt)
    r = pde.eta * phi + pde.source_const
    s = expand_relaxation(model.lattice, model.rates)
    m_eq, m_r = moment_profiles(model)
    m = lat.M @ flat
    m -= s[:, None] * (m - m_eq[:, None] * phi[None, :])
    if pde.eta != 0 or pde.source_const != 0:
        m += (dt * (1 - 0.5 * s) * m_r)[:, None] * r[None, :]
    return (lat.M_inv @ m).reshape(f.shape)


def collide_population(f, model):
    """Reference collision f - Lambda (f - w phi) + dt (I - Lambda/2) w R in population space."""
    lat = model.lattice
    pde, dt = model.pde, model.disc.dt
    q = lat.q
    flat = f.reshape(q, -1)
    phi = macro_field(flat, pde.eta, pde.source_const, dt)
    r = pde.eta * phi + pde.source_const
    w = model.expanded_weights()
    lam = model.collision()
    out = flat - lam @ (flat - w[:, None] * phi[None, :]) + dt * ((np.eye(q) - 0.5 * lam) @ w)[:, None] * r[None, :]
    return out.reshape(f.shape)


def stream(f, velocities):
    """Pull streaming: out_k(x) = f_k(x - e_k) with periodic wrap."""
    out = np.empty_like(f)
    d = f.ndim - 1
    axes = tuple(range(d))
    for k, e in enumerate(velocities):
        shift = tuple(int(c) for c in e)
        out[k] = np.roll(f[k], shift, axis=axes) if any(shift) else f[k]
    return out


def _check_finite(f, step):
    ok = np.isfinite(f)
    if ok.all():
        return
    bad = np.argwhere(~ok)[0]
    raise DivergenceDetected(f"non-finite population at step {step}, cell {tuple(int(i) for i in bad[1:])}",
                             step=step, cell=tuple(int(i) for i in bad[1:]))


def step(state, model):
    """Advance one time step (returns a new state; the input is left untouched)."""
    post = collide(state.f, model)
    new = stream(post, model.lattice.velocities)
    _check_finite(new, state.time_index + 1)
    return FieldState(new, state.time_index + 1)


def _population_sum(phi0, model):
    # sum_k f_k that the macroscopic recovery maps back to phi0
    pde, dt = model.pde, model.disc.dt
    return phi0 - 0.5 * dt * (pde.eta * phi0 + pde.source_const)


def init_equilibrium(phi0, model):
    """f_k = w_k (phi0 - dt R(phi0) / 2), i.e. w_k phi0 without a source.

    The shift makes ``macro_field`` return phi0 exactly on the initial state.
    """
    w = model.expanded_weights()
    phi0 = np.asarray(phi0, dtype=float)
    return FieldState(w.reshape((-1,) + (1,) * phi0.ndim) * _population_sum(phi0, model)[None])


def central_gradient(phi, dx):
    """Fourth-order periodic central differences along every axis."""
    grads = []
    for ax in range(phi.ndim):
        p1, m1 = np.roll(phi, -1, ax), np.roll(phi, 1, ax)
        p2, m2 = np.roll(phi, -2, ax), np.roll(phi, 2, ax)
        grads.append((8 * (p1 - m1) - (p2 - m2)) / (12 * dx))
    return grads


def init_fourth_order(phi0, model, grad_phi0=None):
    """f = w (phi0 - dt R(phi0) / 2) - dx Lambda^{-1} (w_k e_k . grad phi0).

    ``grad_phi0`` is a sequence of ``d`` arrays; without it the gradient is
    taken by fourth-order periodic central differences.
    """
    phi0 = np.asarray(phi0, dtype=float)
    dx = model.disc.dx
    if grad_phi0 is None:
        grad_phi0 = central_gradient(phi0, dx)
    if len(grad_phi0) != model.d:
        raise ConfigurationError(f"gradient needs {model.d} components")
    w = model.expanded_weights()
    vel = model.lattice.velocities.astype(float)
    q = len(w)
    directional = sum(vel[:, l, None] * np.asarray(g, dtype=float).reshape(1, -1) for l, g in enumerate(grad_phi0))
    lam_inv = lu_invert(model.collision())
    corr = lam_inv @ (w[:, None] * directional)
    f = w[:, None] * _population_sum(phi0, model).reshape(1, -1) - dx * corr
    return FieldState(f.reshape((q,) + phi0.shape))


@dataclass(frozen=True)
class RunResult:
    phi: np.ndarray
    steps: int
    time: float
    state: FieldState


def steps_for(t_final, dt, rel_tol=1e-9):
    """Number of whole steps up to ``t_final``; floors (with a warning) when not a multiple."""
    if t_final < 0:
        raise ConfigurationError("t_final must be nonnegative")
    ratio = t_final / dt
    n = round(ratio)
    if abs(ratio - n) <= rel_tol * max(1.0, ratio):
        return int(n)
    n = math.floor(ratio)
    warnings.warn(f"t_final={t_final} is not a multiple of dt={dt}; running {n} steps to t={n * dt}",
                  stacklevel=2)
    return n


def run(state, model, t_final=None, n_steps=None, callback=None):
    if (t_final is None) == (n_steps is None):
        raise ConfigurationError("give exactly one of t_final and n_steps")
    if n_steps is None:
        n_steps = steps_for(t_final, model.disc.dt)
    for _ in range(n_steps):
        state = step(state, model)
        if callback is not None:
            callback(state)
    return RunResult(phi_of(state, model), n_steps, state.time_index * model.disc.dt, state)


def grid_nodes(d, dx, lower=-1.0, upper=1.0):
    """Periodic node coordinates x_j = lower + j dx, one array per axis (``ij`` indexing)."""
    length = upper - lower
    n = round(length / dx)
    if n < 1 or abs(n * dx - length) > 1e-9 * length:
        raise ConfigurationError(f"dx={dx} does not divide the domain length {length}")
    x = lower + dx * np.arange(n)
    return np.meshgrid(*([x] * d), indexing="ij")


def write_field_csv(path_or_file, phi):
    """One row per cell, ``i1,...,id,phi``, row-major."""
    phi = np.asarray(phi)
    own = isinstance(path_or_file, (str, os.PathLike))
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        fh.write(",".join([f"i{l + 1}" for l in range(phi.ndim)] + ["phi"]) + "\n")
        for idx in np.ndindex(phi.shape):
            fh.write(",".join(str(i) for i in idx) + f",{phi[idx]:.17g}\n")
    finally:
        if own:
            fh.close()
