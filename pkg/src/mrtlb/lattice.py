"""Velocity sets, natural moment bases and MRT relaxation data.

Two lattice families in ``d`` dimensions:

* ``Family.FULL``: DdQ(2d^2+1) -- rest, 2d axis velocities and four planar
  diagonals per axis pair.
* ``Family.AXIS``: DdQ(2d+1) -- rest and the 2d axis velocities.

Populations are ordered as: rest; +axis unit vectors; -axis unit vectors;
then (FULL only) for each pair ``i < j`` the diagonals with sign patterns
(+,+), (-,+), (-,-), (+,-) in components ``(i, j)``.

The moment basis is the non-orthogonal monomial basis: 1, X_i, X_i^2,
X_i X_j (i<j), X_i^2 X_j (i, then j != i), X_i^2 X_j^2 (i<j).
"""

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .linalg import lu_invert


class Family(str, enum.Enum):
    FULL = "full"
    AXIS = "axis"


def pairs(d):
    """Unordered axis pairs ``(i, j)``, ``i < j``, in lexicographic order."""
    return list(itertools.combinations(range(d), 2))


def ordered_pairs(d):
    """Ordered pairs ``(i, j)``, ``j != i``, matching the X_i^2 X_j moment rows."""
    return [(i, j) for i in range(d) for j in range(d) if j != i]


def _velocities(d, family):
    eye = np.eye(d, dtype=np.int64)
    rows = [np.zeros(d, dtype=np.int64)]
    rows.extend(eye)
    rows.extend(-eye)
    if family is Family.FULL:
        for i, j in pairs(d):
            for si, sj in ((1, 1), (-1, 1), (-1, -1), (1, -1)):
                v = np.zeros(d, dtype=np.int64)
                v[i], v[j] = si, sj
                rows.append(v)
    return np.array(rows, dtype=np.int64)


def _exponents(d, family):
    eye = np.eye(d, dtype=np.int64)
    rows = [np.zeros(d, dtype=np.int64)]
    rows.extend(eye)
    rows.extend(2 * eye)
    if family is Family.FULL:
        rows.extend(eye[i] + eye[j] for i, j in pairs(d))
        rows.extend(2 * eye[i] + eye[j] for i, j in ordered_pairs(d))
        rows.extend(2 * eye[i] + 2 * eye[j] for i, j in pairs(d))
    return np.array(rows, dtype=np.int64)


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LatticeSpec:
    d: int
    family: Family
    q: int
    velocities: np.ndarray = field(repr=False)
    poly_exponents: np.ndarray = field(repr=False)
    M: np.ndarray = field(repr=False)
    M_inv: np.ndarray = field(repr=False)

    @property
    def name(self):
        return f"D{self.d}Q{self.q}"

    def monomial(self, exponents):
        """Values of prod_l e_{k,l}^{n_l} over all populations (exact integers)."""
        n = np.asarray(exponents, dtype=np.int64)
        if n.shape != (self.d,) or np.any(n < 0):
            raise ConfigurationError(f"exponents must be {self.d} nonnegative integers")
        return np.prod(self.velocities ** n, axis=1)

    def opposite(self):
        """Index permutation mapping each velocity to its negation."""
        lookup = {tuple(v): k for k, v in enumerate(self.velocities)}
        return np.array([lookup[tuple(-v)] for v in self.velocities])


def build_lattice(d, family=Family.FULL):
    d = int(d)
    if d < 1:
        raise ConfigurationError("dimension must be >= 1")
    family = Family(family)
    vel = _velocities(d, family)
    exps = _exponents(d, family)
    # integer powers first, then convert
    m_int = np.prod(vel[None, :, :] ** exps[:, None, :], axis=2)
    m = m_int.astype(float)
    m_inv = lu_invert(m)
    return LatticeSpec(d, family, len(vel), _frozen(vel), _frozen(exps), _frozen(m), _frozen(m_inv))


@dataclass(frozen=True)
class WeightSet:
    """Weight coefficients; the rest weight is implied by normalisation.

    ``omega_axis`` holds one weight per axis (shared by the +/- velocities),
    ``omega_diag`` the single weight of every diagonal velocity (FULL only).
    Values may be floats or ``fractions.Fraction`` -- arithmetic is carried
    out in the input type.
    """

    omega_axis: tuple
    omega_diag: object = None

    def __post_init__(self):
        object.__setattr__(self, "omega_axis", tuple(self.omega_axis))

    @property
    def d(self):
        return len(self.omega_axis)

    @property
    def omega0(self):
        d = self.d
        diag = self.omega_diag if self.omega_diag is not None else 0
        return 1 - 2 * sum(self.omega_axis) - 2 * d * (d - 1) * diag

    def expand_list(self, spec):
        if len(self.omega_axis) != spec.d:
            raise ConfigurationError("weight set dimension does not match lattice")
        out = [self.omega0, *self.omega_axis, *self.omega_axis]
        if spec.family is Family.FULL:
            if self.omega_diag is None:
                raise ConfigurationError("FULL lattice requires a diagonal weight")
            out.extend([self.omega_diag] * (spec.q - 2 * spec.d - 1))
        elif self.omega_diag not in (None, 0):
            raise ConfigurationError("AXIS lattice has no diagonal weight")
        return out

    def expand(self, spec):
        return np.array([float(w) for w in self.expand_list(spec)])

    def admissible(self, spec):
        w = self.expand(spec)
        return bool(np.all((w > 0) & (w < 1)))


def weight_moment(spec, weights, exponents):
    """sum_k (prod_l e_{k,l}^{n_l}) w_k over all populations."""
    mono = spec.monomial(exponents)
    return float(np.dot(mono.astype(float), weights.expand(spec)))


@dataclass(frozen=True)
class RelaxationSet:
    """Relaxation rates grouped by moment order.

    ``s2_cross`` follows :func:`pairs`, ``s3`` (rates of X_i^2 X_j) follows
    :func:`ordered_pairs`, ``s4`` follows :func:`pairs`.  The AXIS family
    only uses ``s0``, ``s_axis`` and ``s2_diag_sq``.
    """

    s_axis: tuple
    s2_diag_sq: tuple
    s2_cross: tuple = ()
    s3: tuple = ()
    s4: tuple = ()
    s0: float = 1.0

    def __post_init__(self):
        for name in ("s_axis", "s2_diag_sq", "s2_cross", "s3", "s4"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))

    @property
    def d(self):
        return len(self.s_axis)

    @classmethod
    def uniform(cls, spec, s):
        d = spec.d
        if spec.family is Family.AXIS:
            return cls((s,) * d, (s,) * d, s0=s)
        npair = d * (d - 1) // 2
        return cls((s,) * d, (s,) * d, (s,) * npair, (s,) * (2 * npair), (s,) * npair, s0=s)

    @classmethod
    def tied(cls, s_axis, s2, s_cross=(), family=Family.FULL, s0=1.0):
        """Rates obeying the stability ties s_{3|x_i^2 x_j} = s_{x_j}, s4 = s_{2|x_i^2} = s2."""
        s_axis = tuple(s_axis)
        d = len(s_axis)
        if Family(family) is Family.AXIS:
            return cls(s_axis, (s2,) * d, s0=s0)
        npair = d * (d - 1) // 2
        s_cross = tuple(s_cross)
        if len(s_cross) != npair:
            raise ConfigurationError(f"expected {npair} cross rates, got {len(s_cross)}")
        s3 = tuple(s_axis[j] for _, j in ordered_pairs(d))
        return cls(s_axis, (s2,) * d, s_cross, s3, (s2,) * npair, s0=s0)

    def replace(self, **changes):
        values = {name: getattr(self, name) for name in ("s_axis", "s2_diag_sq", "s2_cross", "s3", "s4", "s0")}
        values.update(changes)
        return RelaxationSet(**values)

    def nonconserved(self):
        return (*self.s_axis, *self.s2_diag_sq, *self.s2_cross, *self.s3, *self.s4)


def expand_relaxation(spec, rates):
    """Diagonal of S aligned with ``spec.poly_exponents``."""
    d = spec.d
    npair = d * (d - 1) // 2
    expected = {"s_axis": d, "s2_diag_sq": d}
    if spec.family is Family.FULL:
        expected.update(s2_cross=npair, s3=2 * npair, s4=npair)
    else:
        expected.update(s2_cross=0, s3=0, s4=0)
    for name, n in expected.items():
        if len(getattr(rates, name)) != n:
            raise ConfigurationError(f"{name}: expected {n} rates for {spec.name}, got {len(getattr(rates, name))}")
    diag = np.array([rates.s0, *rates.s_axis, *rates.s2_diag_sq, *rates.s2_cross, *rates.s3, *rates.s4])
    assert diag.shape == (spec.q,)
    return diag


def collision_matrix(spec, rates):
    """Lambda = M^{-1} S M."""
    s = expand_relaxation(spec, rates)
    return spec.M_inv @ (s[:, None] * spec.M)


def moment_rate(spec, rates, exponents):
    """Rate s such that sum_k mono(e_k) Lambda_{ki} = s mono(e_i), or None if mono vanishes.

    The monomial is reduced on the lattice (e^3 = e) and matched against the
    rows of M; this is the computational counterpart of the rate-aliasing
    rules for moments that are not themselves basis rows.
    """
    mono = spec.monomial(exponents)
    if not np.any(mono):
        return None
    s = expand_relaxation(spec, rates)
    m_int = np.rint(spec.M).astype(np.int64)
    hits = np.flatnonzero(np.all(m_int == mono[None, :], axis=1))
    if len(hits) == 0:
        raise ConfigurationError(f"monomial {tuple(exponents)} is not representable on {spec.name}")
    return float(s[hits[0]])


def write_matrix_csv(path, matrix):
    np.savetxt(path, np.asarray(matrix), delimiter=",", fmt="%.17g")
