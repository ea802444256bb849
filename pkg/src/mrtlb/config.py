"""TOML run configuration.

Numbers may be given as TOML numbers or as strings holding a decimal or a
rational (``"11/45"``).  A full example lives in ``configs/``; the schema
is::

    [model]
    d = 2                      # optional when eps_tilde/kappa are given
    family = "full"            # full | axis
    method = "general"         # general | isotropic | axis
    eps_tilde = [0.4, 0.1]     # exactly one of eps_tilde / kappa
    eta = 0.0
    source_const = 0.0
    omega_tilde = "1/36"       # default depends on d
    s2_axis = 1.0
    branch = [0, 1]            # optional root selection per axis

    [discretization]
    dx = 0.01
    dt = 0.025                 # exactly one of dt / scaling_ratio

    [overrides]                # optional, applied after synthesis
    s3 = [...]                 # any RelaxationSet field, omega_axis, omega_diag

    [case]
    name = "gauss_hill"        # gauss_hill | sine_source
    gamma0 = 0.05

    [run]
    t_final = 2.0
    init_scheme = "fourth_order"
    dx_list = ["1/50", "1/100", "1/200"]
    init_schemes = ["equilibrium", "fourth_order"]

    [stability]
    resolution = 64

    [region]
    kind = "stability"         # stability | solvability
    x_range = [0.0, 0.5]
    y_range = [0.0, 0.5]
    n = [21, 21]
    resolution = 16
    s_axis = 1.2
    s_cross = 1.1

    [output]
    dir = "out"
"""

import os
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigurationError
from .lattice import Family
from .params import Discretization, PDEParams, parse_number

SECTIONS = {
    "model": {"d", "family", "method", "eps_tilde", "kappa", "eta", "source_const", "omega_tilde", "s2_axis",
              "branch"},
    "discretization": {"dx", "dt", "scaling_ratio"},
    "overrides": {"s0", "s_axis", "s2_diag_sq", "s2_cross", "s3", "s4", "omega_axis", "omega_diag"},
    "case": {"name", "gamma0"},
    "run": {"t_final", "init_scheme", "dx_list", "init_schemes"},
    "stability": {"resolution"},
    "region": {"kind", "x_range", "y_range", "n", "resolution", "s_axis", "s2_axis", "s_cross", "omega_tilde",
               "other_weights"},
    "output": {"dir"},
}


def _num_list(value, name):
    if not isinstance(value, (list, tuple)):
        raise ConfigurationError(f"{name} must be a list")
    return tuple(parse_number(v) for v in value)


def _opt_num(section, key, default=None):
    return parse_number(section[key]) if key in section else default


@dataclass
class RunConfig:
    d: int
    family: Family
    method: str
    kappa: tuple
    eta: float
    source_const: float
    omega_tilde: object
    s2_axis: object
    branch: object
    dx: float
    dt: float
    overrides: dict = field(default_factory=dict)
    case: str = None
    gamma0: float = 0.05
    t_final: float = None
    init_scheme: str = "fourth_order"
    dx_list: tuple = ()
    init_schemes: tuple = ()
    resolution: int = None
    region: dict = field(default_factory=dict)
    output_dir: str = None

    @property
    def scaling_ratio(self):
        return self.dt / self.dx ** 2

    @property
    def eps_tilde(self):
        return tuple(k * self.scaling_ratio for k in self.kappa)

    def pde(self):
        return PDEParams(self.kappa, self.eta, self.source_const)

    def disc(self, dx=None):
        if dx is None:
            return Discretization(self.dx, self.dt)
        return Discretization.from_scaling(dx, self.scaling_ratio)


def parse_config(raw):
    """Validate a parsed TOML mapping and build a :class:`RunConfig`."""
    unknown = set(raw) - set(SECTIONS)
    if unknown:
        raise ConfigurationError(f"unknown section(s): {sorted(unknown)}")
    for name, keys in SECTIONS.items():
        extra = set(raw.get(name, {})) - keys
        if extra:
            raise ConfigurationError(f"[{name}]: unknown key(s) {sorted(extra)}")
    model = raw.get("model", {})
    disc = raw.get("discretization", {})

    if ("eps_tilde" in model) == ("kappa" in model):
        raise ConfigurationError("give exactly one of model.eps_tilde and model.kappa")
    if ("dt" in disc) == ("scaling_ratio" in disc):
        raise ConfigurationError("give exactly one of discretization.dt and discretization.scaling_ratio")
    run = raw.get("run", {})
    if "dx" in disc:
        dx = parse_number(disc["dx"])
    elif run.get("dx_list"):
        dx = parse_number(run["dx_list"][0])
    else:
        raise ConfigurationError("discretization.dx is required")
    if dx <= 0:
        raise ConfigurationError("dx must be positive")
    dt = parse_number(disc["dt"]) if "dt" in disc else parse_number(disc["scaling_ratio"]) * dx * dx
    if dt <= 0:
        raise ConfigurationError("dt must be positive")
    xi = dt / dx ** 2
    if "eps_tilde" in model:
        kappa = tuple(e / xi for e in _num_list(model["eps_tilde"], "eps_tilde"))
    else:
        kappa = _num_list(model["kappa"], "kappa")
    d = int(model.get("d", len(kappa)))
    if d != len(kappa) or d < 1:
        raise ConfigurationError(f"d={d} does not match {len(kappa)} diffusion coefficients")
    if any(k <= 0 for k in kappa):
        raise ConfigurationError("diffusion coefficients must be positive")

    try:
        family = Family(str(model.get("family", "full")).lower())
    except ValueError as exc:
        raise ConfigurationError(f"unknown lattice family {model.get('family')!r}") from exc
    method = str(model.get("method", "axis" if family is Family.AXIS else "general")).lower()
    if method not in ("general", "isotropic", "axis"):
        raise ConfigurationError(f"unknown method {method!r}")
    if (method == "axis") != (family is Family.AXIS):
        raise ConfigurationError(f"method {method!r} is not available on the {family.value} lattice")
    branch = model.get("branch")
    if branch is not None:
        if not isinstance(branch, list) or len(branch) != d or not all(isinstance(b, int) and b >= 0 for b in branch):
            raise ConfigurationError(f"branch must be {d} nonnegative integers")
        branch = tuple(branch)

    overrides = {}
    for key, value in raw.get("overrides", {}).items():
        if key in ("s0", "omega_diag"):
            overrides[key] = parse_number(value)
        else:
            overrides[key] = _num_list(value, key)

    case = raw.get("case", {})
    case_name = case.get("name")
    if case_name is not None and case_name not in ("gauss_hill", "sine_source"):
        raise ConfigurationError(f"unknown case {case_name!r}")
    init_scheme = run.get("init_scheme", "fourth_order")
    schemes = tuple(run.get("init_schemes", (init_scheme,)))
    for s in (init_scheme, *schemes):
        if s not in ("equilibrium", "fourth_order"):
            raise ConfigurationError(f"unknown init scheme {s!r}")
    t_final = _opt_num(run, "t_final")
    if t_final is not None and t_final < 0:
        raise ConfigurationError("t_final must be nonnegative")
    resolution = raw.get("stability", {}).get("resolution")
    if resolution is not None and (not isinstance(resolution, int) or resolution < 1):
        raise ConfigurationError("stability.resolution must be a positive integer")

    return RunConfig(
        d=d, family=family, method=method, kappa=kappa,
        eta=_opt_num(model, "eta", 0.0), source_const=_opt_num(model, "source_const", 0.0),
        omega_tilde=_opt_num(model, "omega_tilde"), s2_axis=_opt_num(model, "s2_axis"), branch=branch,
        dx=dx, dt=dt, overrides=overrides, case=case_name, gamma0=_opt_num(case, "gamma0", 0.05),
        t_final=t_final, init_scheme=init_scheme,
        dx_list=_num_list(run["dx_list"], "dx_list") if "dx_list" in run else (),
        init_schemes=schemes, resolution=resolution, region=dict(raw.get("region", {})),
        output_dir=raw.get("output", {}).get("dir"),
    )


def load_config(path):
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"malformed config {path}: {exc}") from exc
    return parse_config(raw)


def output_path(config, out, default_name):
    """Resolve the output file: --out, then MRTLB_OUTPUT_DIR, then [output].dir, then the cwd."""
    if out:
        return out
    base = os.environ.get("MRTLB_OUTPUT_DIR") or (config.output_dir if config else None) or "."
    return os.path.join(base, default_name)
