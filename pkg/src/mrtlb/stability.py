"""Stability structure and von Neumann analysis of the linearised update.

With f^eq = E f (E_{kj} = w_k) and the source folded into the macroscopic
recovery, one time step acts on the populations as (I + J) followed by
streaming, where

    J = Lambda (E - I) + (2 dt eta / (2 - dt eta)) E.

The model has the stability structure when J W is symmetric and negative
semi-definite (W = diag(w)).  The amplification matrix at wavevector k is
G(k) = diag(exp(-i e_j . k)) (I + J).
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateSource, InfeasibleParameters
from .lattice import Family, RelaxationSet, WeightSet, build_lattice, ordered_pairs
from .linalg import eigvals_batched, sym_eigenvalues
from .params import Discretization, ModelParams, PDEParams, admissible_models

DEFAULT_RESOLUTION = {1: 128, 2: 64, 3: 32, 4: 16}
MODULUS_TOL = 1e-10
UNIT_TOL = 1e-9
CLUSTER_TOL = 1e-7


@dataclass(frozen=True)
class JacobianBundle:
    J: np.ndarray
    W: np.ndarray
    E: np.ndarray
    eta_factor: float


@dataclass(frozen=True)
class StabilityReport:
    jw_asymmetry: float = math.nan
    jw_eigen_max: float = math.nan
    rate_ranges_ok: bool = False
    weights_ok: bool = False
    vn_max_modulus: float = math.nan
    vn_simple_roots: bool = False
    scan_resolution: int = 0
    tol_sym: float = 1e-12
    tol_neg: float = 1e-12

    @property
    def structure_ok(self):
        return bool(self.jw_asymmetry < self.tol_sym and self.jw_eigen_max <= self.tol_neg and self.rate_ranges_ok)

    @property
    def scan_ok(self):
        return bool(self.vn_max_modulus <= 1 + MODULUS_TOL and self.vn_simple_roots)

    def rows(self):
        return [
            ("jw_asymmetry", self.jw_asymmetry),
            ("jw_eigen_max", self.jw_eigen_max),
            ("rate_ranges_ok", int(self.rate_ranges_ok)),
            ("weights_ok", int(self.weights_ok)),
            ("structure_ok", int(self.structure_ok)),
            ("vn_max_modulus", self.vn_max_modulus),
            ("vn_simple_roots", int(self.vn_simple_roots)),
            ("scan_resolution", self.scan_resolution),
            ("stable", int(self.structure_ok and self.scan_ok)),
        ]


def eta_factor(eta, dt):
    a = eta * dt
    if a == 2:
        raise DegenerateSource("dt * eta = 2 makes the macroscopic recovery singular")
    return 2 * a / (2 - a)


def build_jacobian(model):
    w = model.expanded_weights()
    q = len(w)
    e = np.outer(w, np.ones(q))
    factor = eta_factor(model.pde.eta, model.disc.dt)
    lam = model.collision()
    j = lam @ (e - np.eye(q)) + factor * e
    return JacobianBundle(j, w, e, factor)


def ties_hold(rates, family=Family.FULL):
    if family is Family.AXIS:
        return len(set(rates.s2_diag_sq)) <= 1
    d = rates.d
    s3_ok = all(s3 == rates.s_axis[j] for (_, j), s3 in zip(ordered_pairs(d), rates.s3))
    s2 = rates.s2_diag_sq[0]
    return s3_ok and all(s == s2 for s in (*rates.s2_diag_sq, *rates.s4))


def check_structure(model, tol_sym=1e-12, tol_neg=1e-12):
    """JW symmetry / semi-definiteness and rate-range check; never raises."""
    jac = build_jacobian(model)
    w = jac.W
    jw = jac.J * w[None, :]
    asym = float(np.abs(jw - jw.T).max())
    weights_ok = bool(np.all((w > 0) & (w < 1)))
    if np.all(w > 0):
        r = 1 / np.sqrt(w)
        a = r[:, None] * jw * r[None, :]
        eig_max = float(sym_eigenvalues(0.5 * (a + a.T))[-1])
    else:
        eig_max = math.inf
    rates = model.rates
    ranges = all(0 < s < 2 for s in rates.nonconserved()) and rates.s0 != 0
    ranges = ranges and ties_hold(rates, model.lattice.family)
    return StabilityReport(jw_asymmetry=asym, jw_eigen_max=eig_max, rate_ranges_ok=bool(ranges),
                           weights_ok=weights_ok, tol_sym=tol_sym, tol_neg=tol_neg)


def _shift_phases(velocities, wavevectors):
    return np.exp(-1j * (np.asarray(wavevectors) @ velocities.T))


def amplification(model, wavevector, jacobian=None):
    jac = jacobian or build_jacobian(model)
    vel = model.lattice.velocities.astype(float)
    k = np.asarray(wavevector, dtype=float)
    if k.shape != (model.d,):
        raise ValueError(f"wavevector must have {model.d} components")
    phase = _shift_phases(vel, k)
    return phase[:, None] * (np.eye(len(jac.W)) + jac.J)


def wavevector_grid(d, resolution):
    theta = 2 * np.pi * np.arange(resolution) / resolution
    mesh = np.meshgrid(*([theta] * d), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _scan_chunk(step, vel, wavevectors, conserved):
    phase = _shift_phases(vel, wavevectors)
    g = phase[:, :, None] * step[None, :, :]
    lam = eigvals_batched(g)
    mod = np.abs(lam)
    # the conserved eigenvalue at k = 0 is excluded from the simple-root test
    at_zero = np.all(wavevectors == 0, axis=1)
    on_circle = mod >= 1 - UNIT_TOL
    if np.any(at_zero):
        idx = np.flatnonzero(at_zero)
        nearest = np.argmin(np.abs(lam[idx] - conserved), axis=1)
        on_circle[idx, nearest] = False
    dist = np.abs(lam[:, :, None] - lam[:, None, :])
    both = on_circle[:, :, None] & on_circle[:, None, :]
    q = lam.shape[1]
    offdiag = ~np.eye(q, dtype=bool)
    repeated = np.any(both & offdiag[None] & (dist < CLUSTER_TOL))
    return float(mod.max()), not bool(repeated)


def von_neumann_scan(model, resolution=None, threads=None, chunk=2048):
    """Max eigenvalue modulus of G and the simple-root verdict over a uniform wavevector grid."""
    d = model.d
    if resolution is None:
        resolution = DEFAULT_RESOLUTION.get(d, 16)
    if resolution < 1:
        raise ValueError("resolution must be positive")
    jac = build_jacobian(model)
    step = np.eye(len(jac.W)) + jac.J
    vel = model.lattice.velocities.astype(float)
    ks = wavevector_grid(d, resolution)
    pieces = [ks[i:i + chunk] for i in range(0, len(ks), chunk)]
    conserved = 1 + jac.eta_factor
    workers = max(1, min(threads or os.cpu_count() or 1, len(pieces)))
    if workers == 1:
        results = [_scan_chunk(step, vel, p, conserved) for p in pieces]
    else:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda p: _scan_chunk(step, vel, p, conserved), pieces))
    return StabilityReport(vn_max_modulus=max(r[0] for r in results),
                           vn_simple_roots=all(r[1] for r in results), scan_resolution=resolution)


def analyze(model, resolution=None, threads=None):
    """Structure check followed by a von Neumann scan."""
    scan = von_neumann_scan(model, resolution, threads)
    return replace(check_structure(model), vn_max_modulus=scan.vn_max_modulus,
                   vn_simple_roots=scan.vn_simple_roots, scan_resolution=scan.scan_resolution)


# --- region rasters ----------------------------------------------------------------------

@dataclass(frozen=True)
class Raster:
    x: np.ndarray
    y: np.ndarray
    verdict: np.ndarray  # shape (len(x), len(y)), 1 = stable / feasible

    def rows(self):
        for i, xv in enumerate(self.x):
            for j, yv in enumerate(self.y):
                yield float(xv), float(yv), int(self.verdict[i, j])

    def write_csv(self, path_or_file):
        own = isinstance(path_or_file, (str, os.PathLike))
        fh = open(path_or_file, "w", newline="") if own else path_or_file
        try:
            fh.write("x,y,verdict\n")
            for xv, yv, v in self.rows():
                fh.write(f"{xv:.17g},{yv:.17g},{v}\n")
        finally:
            if own:
                fh.close()


def _axis(lo, hi, n):
    return np.array([0.5 * (lo + hi)]) if n == 1 else np.linspace(lo, hi, n)


def _map(fn, items, threads):
    if (threads or 1) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(threads) as pool:
        return list(pool.map(fn, items))


def stability_region(d=2, omega_tilde=1 / 36, x_range=(0.0, 0.5), y_range=(0.0, 0.5), n=(21, 21),
                     s_axis=1.2, s2_axis=1.0, s_cross=1.1, other_weights=None, axes=(0, 1),
                     resolution=16, threads=None, prefilter=False):
    """Raster of von Neumann verdicts over (omega_i, omega_j) with tied rates held fixed.

    Axis weights other than the two scanned ones come from ``other_weights``
    (default 1/9 each).  With ``prefilter`` points whose weights fall outside
    (0, 1) are marked unstable without scanning.
    """
    lattice = build_lattice(d, Family.FULL)
    npair = d * (d - 1) // 2
    rates = RelaxationSet.tied((s_axis,) * d, s2_axis, (s_cross,) * npair)
    base = list(other_weights) if other_weights is not None else [1 / 9] * d
    xs, ys = _axis(*x_range, n[0]), _axis(*y_range, n[1])
    disc = Discretization(1.0, 1.0)
    pde = PDEParams((1.0,) * d)

    def verdict(point):
        wx, wy = point
        om = list(base)
        om[axes[0]], om[axes[1]] = wx, wy
        weights = WeightSet(tuple(om), omega_tilde)
        if prefilter and not weights.admissible(lattice):
            return 0
        model = ModelParams(lattice, weights, rates, rates.s_axis, pde, disc)
        rep = von_neumann_scan(model, resolution, threads=1)
        return int(rep.scan_ok)

    pts = [(x, y) for x in xs for y in ys]
    out = np.array(_map(verdict, pts, threads), dtype=int).reshape(len(xs), len(ys))
    return Raster(xs, ys, out)


def solvability_region(d=2, omega_tilde=1 / 36, s2_axis=1.0, eta=0.0, dt=1 / 40,
                       x_range=(0.01, 0.6), y_range=(0.01, 0.6), n=(30, 30), threads=None):
    """Raster of whether the fourth-order parameter system has an admissible solution.

    The scanned quantities are eps~_1 and eps~_2; the remaining axes (d > 2)
    share eps~_2.
    """
    xs, ys = _axis(*x_range, n[0]), _axis(*y_range, n[1])
    disc = Discretization(1.0, dt)

    def verdict(point):
        ex, ey = point
        eps = (ex,) + (ey,) * (d - 1)
        try:
            pde = PDEParams.from_eps_tilde(eps, disc, eta=eta)
            admissible_models(pde, disc, omega_tilde, s2_axis, first_only=True)
        except InfeasibleParameters:
            return 0
        return 1

    pts = [(x, y) for x in xs for y in ys]
    out = np.array(_map(verdict, pts, threads), dtype=int).reshape(len(xs), len(ys))
    return Raster(xs, ys, out)
