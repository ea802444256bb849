"""Synthesis of fourth-order, structure-preserving relaxation rates and weights.

For each axis ``i`` the pair (omega_i, s~_i) is fixed by two residuals:

* ``eq_axis_weight`` -- the diffusion-number relation
  eps~_i = (1/s~_i - 1/2)(2 omega_i + 4 (d-1) omega~);
* ``eq_axis_fourth`` -- the per-axis fourth-order condition, which involves
  s~_i, the preset s_{2|x_i^2} and eps~_i only.

For each pair ``i < j`` the cross rate s_{2|x_i x_j} is the root of
``eq_cross``.  The first residual is linear in omega_i and the second is a
quadratic in 1/s~_i, so every axis has at most two candidate roots; the
cross residual is affine in 1/s_{2|x_i x_j}.  Which axis root to use is not
determined by the conditions themselves -- see :func:`solve_model`.

Relaxation rates that multiply the source (``eta != 0``) are obtained from
the "tilde" rates with :func:`tilde_to_s`.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConfigurationError, InfeasibleCorrection, InfeasibleParameters
from .lattice import Family, RelaxationSet, WeightSet, build_lattice, collision_matrix, ordered_pairs, pairs

N_BRACKETS = 512
DEFAULT_OMEGA_TILDE = {1: 0.0, 2: 1 / 36, 3: 1 / 180, 4: 1 / 360}
DEFAULT_S2_AXIS = 1.0


def default_omega_tilde(d):
    return DEFAULT_OMEGA_TILDE.get(d, 1 / 360)


@dataclass(frozen=True)
class PDEParams:
    """d_t phi = sum_i kappa_i d_i^2 phi + eta phi + source_const."""

    kappa: tuple
    eta: float = 0.0
    source_const: float = 0.0

    def __post_init__(self):
        kappa = tuple(float(k) for k in self.kappa)
        if not kappa or any(not (k > 0) for k in kappa):
            raise ConfigurationError("diffusion coefficients must be positive")
        object.__setattr__(self, "kappa", kappa)

    @property
    def d(self):
        return len(self.kappa)

    @classmethod
    def from_eps_tilde(cls, eps_tilde, disc, eta=0.0, source_const=0.0):
        xi = disc.scaling_ratio
        return cls(tuple(float(e) / xi for e in eps_tilde), eta, source_const)


@dataclass(frozen=True)
class Discretization:
    dx: float
    dt: float

    def __post_init__(self):
        if not (self.dx > 0 and self.dt > 0):
            raise ConfigurationError("dx and dt must be positive")

    @property
    def scaling_ratio(self):
        """xi = dt / dx^2 (diffusive scaling)."""
        return self.dt / self.dx ** 2

    @classmethod
    def from_scaling(cls, dx, scaling_ratio):
        return cls(dx, scaling_ratio * dx * dx)


@dataclass(frozen=True)
class DiffusionNumbers:
    eps: tuple
    eps_tilde: tuple


@dataclass(frozen=True)
class ModelParams:
    lattice: object
    weights: WeightSet
    rates: RelaxationSet
    rates_tilde: tuple
    pde: PDEParams
    disc: Discretization
    branch: tuple = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def d(self):
        return self.lattice.d

    @property
    def s2_axis(self):
        return self.rates.s2_diag_sq[0]

    def expanded_weights(self):
        if "w" not in self._cache:
            self._cache["w"] = self.weights.expand(self.lattice)
        return self._cache["w"]

    def collision(self):
        if "lam" not in self._cache:
            self._cache["lam"] = collision_matrix(self.lattice, self.rates)
        return self._cache["lam"]

    def diffusion_numbers(self):
        w = self.weights
        diag = w.omega_diag or 0.0
        second = [2 * float(wi) + 4 * (self.d - 1) * float(diag) for wi in w.omega_axis]
        eps = tuple((1 / s - 0.5) * m for s, m in zip(self.rates.s_axis, second))
        eps_t = tuple((1 / s - 0.5) * m for s, m in zip(self.rates_tilde, second))
        return DiffusionNumbers(eps, eps_t)

    def with_rates(self, rates):
        return ModelParams(self.lattice, self.weights, rates, self.rates_tilde, self.pde, self.disc, self.branch)

    def with_weights(self, weights):
        return ModelParams(self.lattice, weights, self.rates, self.rates_tilde, self.pde, self.disc, self.branch)


# --- source correction -------------------------------------------------------------------

def tilde_to_s(s_tilde, eta, dt):
    """Relaxation rate s with eps(s) + (dt/s)(1 - 1/s) eta m2 = eps(s~)."""
    if not (0 < s_tilde < 2):
        raise ConfigurationError(f"s_tilde={s_tilde} outside (0, 2)")
    a = eta * dt
    if abs(a) < 1e-14:
        return float(s_tilde)
    radicand = (s_tilde - 4 * a + a * a * s_tilde + 2 * a * s_tilde) / s_tilde
    if radicand < 0:
        raise InfeasibleCorrection(f"negative radicand {radicand:.3e} for s~={s_tilde}, eta*dt={a}",
                                   values={"s_tilde": s_tilde, "eta_dt": a})
    denom = a - math.sqrt(radicand) + 1
    if denom == 0:
        raise InfeasibleCorrection(f"singular correction for s~={s_tilde}, eta*dt={a}",
                                   values={"s_tilde": s_tilde, "eta_dt": a})
    return 2 * a / denom


# --- residuals ---------------------------------------------------------------------------

def _err1(s_a, s_b, s_g):
    return (-7 / 24 + 1 / (6 * s_a) + (1 / (s_g * s_b) - 1 / (2 * s_g) - 1 / (2 * s_b)) * (1 / s_a - 1)
            - 0.5 * (1 - 1 / s_b) * (1 / s_g - 0.5) + 1 / (6 * s_g))


def _err2(s_a, s2):
    return (1 / s_a - 1) * (1 - 1 / s2 - 1 / s_a) + 0.5 - 0.5 / s2


def eq_axis_weight(eps_tilde, omega, s_tilde, omega_tilde, d):
    return eps_tilde - (1 / s_tilde - 0.5) * (2 * omega + 4 * (d - 1) * omega_tilde)


def eq_axis_fourth(eps_tilde, s_tilde, s2):
    u = 1 / s_tilde
    rhs = (1 / (3 * s_tilde) - 7 / 24 + (u / s2 - 0.5 * u - 0.5 / s2) * (u - 1)
           - 0.5 * (1 - 1 / s2) * (u - 0.5) + _err2(s_tilde, s2) * eps_tilde)
    return (0.5 * eps_tilde * (u - 0.5) - rhs) / (u - 0.5)


def eq_cross(s_cross, eps_i, eps_j, omega_i, omega_j, st_i, st_j, omega_tilde, s2, d):
    """Cross fourth-order residual with s_{3|x_i^2 x_j} = s~_j and s_{3|x_i x_j^2} = s~_i."""
    si2j, sij2 = st_j, st_i
    ww = omega_tilde
    third = (_err1(st_i, s2, si2j) + _err1(st_j, s2, sij2)
             + _err1(st_i, s_cross, si2j) + _err1(st_j, s_cross, sij2)
             + _err1(st_i, s_cross, sij2) + _err1(st_j, s_cross, si2j))
    return eps_i * eps_j - (4 * third * ww
                            + _err2(st_i, s2) * eps_j * (2 * omega_i + 4 * (d - 1) * ww)
                            + _err2(st_j, s2) * eps_i * (2 * omega_j + 4 * (d - 1) * ww))


# --- scalar root finding -----------------------------------------------------------------

def _bisect(f, a, b, fa):
    while True:
        m = 0.5 * (a + b)
        if m <= a or m >= b or b - a <= 1e-15:
            return m
        fm = f(m)
        if fm == 0:
            return m
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b = m


def bracketed_roots(f, lo=0.0, hi=2.0, n=N_BRACKETS, resid_tol=1e-9):
    """Simple roots of ``f`` in the open interval (lo, hi), ascending.

    ``f`` must accept numpy arrays.  The interval is split into ``n`` uniform
    brackets; every sign change is refined by bisection to machine
    resolution.  Sign changes across poles are rejected by a residual check.
    """
    grid = np.linspace(lo, hi, n + 1)
    pad = 1e-12 * (hi - lo)
    grid[0], grid[-1] = lo + pad, hi - pad
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.asarray(f(grid), dtype=float)
    roots = [float(x) for x, v in zip(grid, vals) if v == 0.0]
    for k in np.flatnonzero(np.isfinite(vals[:-1]) & np.isfinite(vals[1:]) & (vals[:-1] * vals[1:] < 0)):
        r = _bisect(lambda x: float(f(x)), grid[k], grid[k + 1], vals[k])
        with np.errstate(divide="ignore", invalid="ignore"):
            res = abs(float(f(r)))
        if res <= resid_tol:
            roots.append(r)
    roots.sort()
    out = []
    for r in roots:
        if not out or r - out[-1] > 1e-12:
            out.append(r)
    return out


# --- per-axis and per-pair solves --------------------------------------------------------

@dataclass(frozen=True)
class AxisSolution:
    omega: float
    s_tilde: float


def axis_candidates(eps_tilde, omega_tilde, s2_axis, d):
    """Admissible (omega_i, s~_i) roots of the axis residuals, ascending in s~.

    Besides omega_i in (0,1) and s~_i in (0,2), a root is dropped when its
    weight alone already forces omega_0 <= 0.
    """
    cap = 0.5 * (1 - 2 * d * (d - 1) * omega_tilde)
    def fourth(s):
        return eq_axis_fourth(eps_tilde, s, s2_axis)

    out = []
    for s in bracketed_roots(fourth):
        omega = 0.5 * (eps_tilde / (1 / s - 0.5) - 4 * (d - 1) * omega_tilde)
        if 0 < omega < min(1.0, cap) and 0 < s < 2:
            out.append(AxisSolution(omega, s))
    return out


def solve_axis(eps_tilde, omega_tilde, s2_axis, d, branch=0):
    """Admissible axis solution number ``branch`` (ascending s~)."""
    cands = axis_candidates(eps_tilde, omega_tilde, s2_axis, d)
    if not cands:
        raise InfeasibleParameters(f"no admissible axis root for eps~={eps_tilde}", reason="axis")
    if branch >= len(cands):
        raise InfeasibleParameters(f"axis branch {branch} unavailable ({len(cands)} admissible)", reason="branch")
    return cands[branch]


def solve_cross(axis_i, axis_j, eps_i, eps_j, omega_tilde, s2_axis, d):
    def resid(s):
        return eq_cross(s, eps_i, eps_j, axis_i.omega, axis_j.omega, axis_i.s_tilde, axis_j.s_tilde,
                        omega_tilde, s2_axis, d)

    roots = bracketed_roots(resid)
    if not roots:
        raise InfeasibleParameters(f"no cross rate in (0,2) for eps~=({eps_i}, {eps_j})", reason="pair")
    return roots[0]


# --- model assembly ----------------------------------------------------------------------

def _check_range(name, value, lo, hi, reason="range"):
    if not (lo < float(value) < hi):
        raise InfeasibleParameters(f"{name}={float(value):.6g} outside ({lo}, {hi})", reason=reason,
                                   values={name: float(value)})


def _assemble(lattice, omega_axis, omega_tilde, s_tilde, s2_axis, s_cross, pde, disc, branch):
    d = lattice.d
    s_axis = []
    for i, st in enumerate(s_tilde):
        try:
            s = tilde_to_s(st, pde.eta, disc.dt)
        except InfeasibleCorrection as exc:
            exc.where = i
            raise
        _check_range(f"s_x{i + 1}", s, 0, 2)
        s_axis.append(s)
    diag = omega_tilde if lattice.family is Family.FULL else None
    weights = WeightSet(tuple(omega_axis), diag)
    _check_range("omega0", weights.omega0, 0, 1, reason="omega0")
    rates = RelaxationSet.tied(s_axis, s2_axis, s_cross, family=lattice.family)
    return ModelParams(lattice, weights, rates, tuple(s_tilde), pde, disc, branch)


def _defaults(d, omega_tilde, s2_axis):
    if omega_tilde is None:
        omega_tilde = default_omega_tilde(d)
    if s2_axis is None:
        s2_axis = DEFAULT_S2_AXIS
    _check_range("s2_axis", s2_axis, 0, 2)
    if d > 1:
        _check_range("omega_tilde", omega_tilde, 0, 1)
    return float(omega_tilde), float(s2_axis)


def eps_tilde_of(pde, disc):
    return tuple(k * disc.scaling_ratio for k in pde.kappa)


def admissible_models(pde, disc, omega_tilde=None, s2_axis=None, first_only=False):
    """Every admissible model over all combinations of axis roots, in lexicographic branch order."""
    d = pde.d
    omega_tilde, s2_axis = _defaults(d, omega_tilde, s2_axis)
    lattice = build_lattice(d, Family.FULL)
    eps = eps_tilde_of(pde, disc)
    cands = [axis_candidates(e, omega_tilde, s2_axis, d) for e in eps]
    for i, c in enumerate(cands):
        if not c:
            raise InfeasibleParameters(f"axis {i + 1}: no admissible root for eps~={eps[i]:.6g}",
                                       reason="axis", where=i)
    cross_cache = {}

    def cross(i, bi, j, bj):
        key = (i, bi, j, bj)
        if key not in cross_cache:
            try:
                cross_cache[key] = solve_cross(cands[i][bi], cands[j][bj], eps[i], eps[j], omega_tilde, s2_axis, d)
            except InfeasibleParameters:
                cross_cache[key] = None
        return cross_cache[key]

    found, failures = [], []
    for branch in itertools.product(*(range(len(c)) for c in cands)):
        s_cross = [cross(i, branch[i], j, branch[j]) for i, j in pairs(d)]
        bad = [p for p, s in zip(pairs(d), s_cross) if s is None]
        if bad:
            failures.append(("pair", bad[0]))
            continue
        try:
            model = _assemble(lattice, [cands[i][b].omega for i, b in enumerate(branch)], omega_tilde,
                              [cands[i][b].s_tilde for i, b in enumerate(branch)], s2_axis, s_cross,
                              pde, disc, branch)
        except InfeasibleParameters as exc:
            failures.append((exc.reason, exc.where))
            continue
        found.append(model)
        if first_only:
            break
    if not found:
        reason, where = failures[-1] if failures else ("infeasible", None)
        raise InfeasibleParameters(f"no admissible parameter set ({reason} at {where})", reason=reason, where=where)
    return found


def solve_model(pde, disc, omega_tilde=None, s2_axis=None, branch=None):
    """Fourth-order, stability-structure-preserving parameters on the FULL lattice.

    ``omega_tilde`` and ``s2_axis`` are preset (defaults depend on ``d``).
    Each axis generally admits two roots; ``branch`` picks, per axis, the
    index into its admissible roots sorted by ascending s~.  With
    ``branch=None`` the first admissible combination in lexicographic order
    is returned (smallest s~ preferred, axis 1 first).
    """
    d = pde.d
    if branch is None:
        return admissible_models(pde, disc, omega_tilde, s2_axis, first_only=True)[0]
    branch = tuple(int(b) for b in branch)
    if len(branch) != d:
        raise ConfigurationError(f"branch needs {d} entries")
    omega_tilde, s2_axis = _defaults(d, omega_tilde, s2_axis)
    eps = eps_tilde_of(pde, disc)
    axes = []
    for i, (e, b) in enumerate(zip(eps, branch)):
        try:
            axes.append(solve_axis(e, omega_tilde, s2_axis, d, b))
        except InfeasibleParameters as exc:
            exc.where = i
            raise
    s_cross = []
    for i, j in pairs(d):
        try:
            s_cross.append(solve_cross(axes[i], axes[j], eps[i], eps[j], omega_tilde, s2_axis, d))
        except InfeasibleParameters as exc:
            exc.where = (i, j)
            raise
    return _assemble(build_lattice(d, Family.FULL), [a.omega for a in axes], omega_tilde,
                     [a.s_tilde for a in axes], s2_axis, s_cross, pde, disc, branch)


# --- closed forms ------------------------------------------------------------------------

@dataclass(frozen=True)
class ClosedForm:
    """Closed-form parameters; exact (``Fraction``) when the inputs are exact."""

    family: Family
    d: int
    omega0: object
    omega_axis: object
    omega_diag: object
    s_tilde: object
    s_axis: float
    s2_axis: object
    s_cross: object = None

    def weights(self):
        diag = self.omega_diag if self.family is Family.FULL else None
        return WeightSet((self.omega_axis,) * self.d, diag)

    def rates(self):
        npair = self.d * (self.d - 1) // 2
        cross = (float(self.s_cross),) * npair if self.family is Family.FULL else ()
        return RelaxationSet.tied((self.s_axis,) * self.d, float(self.s2_axis), cross, family=self.family)

    def model(self, pde, disc):
        lattice = build_lattice(self.d, self.family)
        return ModelParams(lattice, self.weights(), self.rates(), (float(self.s_tilde),) * self.d, pde, disc)


def isotropic_closed_form(eps, omega_tilde, d):
    """Parameters with s_{x_i} = 1 for the isotropic case (FULL lattice)."""
    if d < 1:
        raise ConfigurationError("dimension must be >= 1")
    wt = omega_tilde
    omega = eps + 2 * wt - 2 * d * wt
    omega0 = 1 - 2 * d * omega - 2 * d * (d - 1) * wt
    den2 = 6 * eps - 5
    den_x = 22 * eps * wt - eps ** 2 - 5 * wt + 2 * eps ** 3 - 24 * eps ** 2 * wt
    if den2 == 0 or (d > 1 and den_x == 0):
        raise InfeasibleParameters(f"closed form singular at eps={eps}", reason="pole")
    s2 = 6 * (2 * eps - 1) / den2
    s_cross = -6 * wt * (2 * eps - 1) ** 2 / den_x if d > 1 else None
    _check_range("omega_axis", omega, 0, 1)
    _check_range("omega0", omega0, 0, 1, reason="omega0")
    _check_range("s2_axis", s2, 0, 2)
    if d > 1:
        _check_range("s_cross", s_cross, 0, 2)
    return ClosedForm(Family.FULL, d, omega0, omega, wt, 1, 1.0, s2, s_cross)


def axis_lattice_closed_form(eps, eta, dt, d, check=True):
    """Isotropic parameters on the AXIS lattice; omega_i = sqrt(3) eps.

    ``check=False`` skips the omega_0 range check so that an unstable
    parameter set can still be run (it diverges).
    """
    r3 = math.sqrt(3.0)
    omega = r3 * eps
    omega0 = 1 - 2 * d * r3 * eps
    s_tilde = 6 / (3 + r3)
    s2 = 4 * r3 - 6
    values = {"omega0": omega0, "omega_axis": omega, "s2_axis": s2, "s_tilde": s_tilde}
    if check and not (0 < omega0 < 1):
        raise InfeasibleParameters(f"omega0 = 1 - {2 * d}*sqrt(3)*eps = {omega0:.6g} is not in (0,1)",
                                   reason="omega0", values=values)
    if check:
        _check_range("omega_axis", omega, 0, 1)
    s = tilde_to_s(s_tilde, eta, dt)
    _check_range("s_x", s, 0, 2)
    return ClosedForm(Family.AXIS, d, omega0, omega, None, s_tilde, s, s2)


@dataclass(frozen=True)
class Verdict:
    feasible: bool
    reason: str = ""


def anisotropic_axis_infeasibility(pde, rel_tol=1e-12):
    """Infeasible whenever the diffusion coefficients are not all equal."""
    k = pde.kappa
    spread = (max(k) - min(k)) / max(k)
    if spread > rel_tol:
        return Verdict(False, "anisotropic")
    return Verdict(True)


def synthesize(pde, disc, method="general", omega_tilde=None, s2_axis=None, branch=None, check=True):
    """Dispatch to the general solver or one of the isotropic closed forms.

    ``method`` is ``"general"`` (FULL lattice, any diffusion tensor),
    ``"isotropic"`` (FULL lattice, s_x = 1) or ``"axis"`` (AXIS lattice).
    ``check=False`` only affects the AXIS closed form.
    """
    method = method.lower()
    if method == "general":
        return solve_model(pde, disc, omega_tilde, s2_axis, branch)
    if method not in ("isotropic", "axis"):
        raise ConfigurationError(f"unknown synthesis method {method!r}")
    verdict = anisotropic_axis_infeasibility(pde)
    if not verdict.feasible:
        raise InfeasibleParameters(f"infeasible: anisotropic diffusion has no {method} closed form",
                                   reason="anisotropic")
    eps = pde.kappa[0] * disc.scaling_ratio
    if method == "isotropic":
        wt = default_omega_tilde(pde.d) if omega_tilde is None else omega_tilde
        form = isotropic_closed_form(eps, wt, pde.d)
    else:
        form = axis_lattice_closed_form(eps, pde.eta, disc.dt, pde.d, check=check)
    return form.model(pde, disc)


# --- independent checks ------------------------------------------------------------------

def fourth_order_residuals(model):
    """Recompute every axis and pair residual from a finished model."""
    d = model.d
    eps = eps_tilde_of(model.pde, model.disc)
    wt = float(model.weights.omega_diag or 0.0)
    s2 = model.s2_axis
    st = model.rates_tilde
    om = [float(w) for w in model.weights.omega_axis]
    out = {}
    for i in range(d):
        out[f"eq{i + 1}"] = eq_axis_weight(eps[i], om[i], st[i], wt, d)
        out[f"eq{i + 1}{i + 1}"] = eq_axis_fourth(eps[i], st[i], s2)
    for (i, j), sc in zip(pairs(d), model.rates.s2_cross):
        out[f"eq{i + 1}{j + 1}"] = eq_cross(sc, eps[i], eps[j], om[i], om[j], st[i], st[j], wt, s2, d)
    return out


def zeroth_order_error(model):
    """Per-axis leading truncation error including the source term; zero for a consistent model."""
    d = model.d
    wt = float(model.weights.omega_diag or 0.0)
    eta, dt = model.pde.eta, model.disc.dt
    xi = model.disc.scaling_ratio
    out = []
    for i in range(d):
        s = model.rates.s_axis[i]
        m2 = 2 * float(model.weights.omega_axis[i]) + 4 * (d - 1) * wt
        out.append((1 / s - 0.5) * m2 + (dt / s) * (1 - 1 / s) * eta * m2 - model.pde.kappa[i] * xi)
    return out


def check_invariants(model, tol=1e-12):
    """Raise ``AssertionError`` if a synthesized model breaks a stated invariant."""
    w = model.expanded_weights()
    assert np.all((w > 0) & (w < 1)), "weights outside (0,1)"
    assert all(0 < s < 2 for s in model.rates.nonconserved()), "rates outside (0,2)"
    r = model.rates
    for (i, j), s3 in zip(ordered_pairs(model.d), r.s3):
        assert s3 == r.s_axis[j], f"s3 tie broken at {(i, j)}"
    assert all(s == r.s2_diag_sq[0] for s in (*r.s2_diag_sq, *r.s4)), "s2/s4 tie broken"
    worst = max((abs(v) for v in fourth_order_residuals(model).values()), default=0.0)
    assert worst < tol, f"residual {worst:.3e}"


# --- serialisation -----------------------------------------------------------------------

def parameter_rows(model):
    """(name, value) rows describing a model, in a fixed order."""
    d = model.d
    w = model.weights
    r = model.rates
    rows = [("d", d), ("lattice", model.lattice.name), ("omega0", float(w.omega0))]
    rows += [(f"omega{i + 1}", float(v)) for i, v in enumerate(w.omega_axis)]
    if w.omega_diag is not None:
        rows.append(("omega_tilde", float(w.omega_diag)))
    rows.append(("s0", r.s0))
    rows += [(f"s_x{i + 1}", v) for i, v in enumerate(r.s_axis)]
    rows += [(f"s_tilde_x{i + 1}", float(v)) for i, v in enumerate(model.rates_tilde)]
    rows += [(f"s2_x{i + 1}x{i + 1}", v) for i, v in enumerate(r.s2_diag_sq)]
    rows += [(f"s2_x{i + 1}x{j + 1}", v) for (i, j), v in zip(pairs(d), r.s2_cross)]
    rows += [(f"s3_x{i + 1}x{i + 1}x{j + 1}", v) for (i, j), v in zip(ordered_pairs(d), r.s3)]
    rows += [(f"s4_x{i + 1}x{i + 1}x{j + 1}x{j + 1}", v) for (i, j), v in zip(pairs(d), r.s4)]
    eps = eps_tilde_of(model.pde, model.disc)
    rows += [(f"eps_tilde_x{i + 1}", v) for i, v in enumerate(eps)]
    rows += [("eta", model.pde.eta), ("source", model.pde.source_const), ("dx", model.disc.dx), ("dt", model.disc.dt)]
    if model.branch is not None:
        rows.append(("branch", " ".join(str(b) for b in model.branch)))
    return rows


def parse_number(text):
    """Parse a decimal or rational (``"11/45"``) literal to float, exactly rounded."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return float(text)
    try:
        return float(Fraction(str(text).strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"not a number: {text!r}") from exc
