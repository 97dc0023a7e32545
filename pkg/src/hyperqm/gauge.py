"""Classical particle with internal isospin in an external gauge field.

Units have hbar = c = 1 and the time-axial gauge ``A_0 = 0``.  A potential
maps positions of shape ``(..., 3)`` to arrays of shape ``(..., 3, a_dim)``
indexed ``[j, a]`` (space index first, internal index second).

Field strengths follow the usual Yang-Mills form::

    E_i^a = -d_t A_i^a
    B_i^a = eps_ijk (d_j A_k^a + 1/2 g f_abc A_j^b A_k^c)

The internal structure constants are zero for ``a_dim = 1``, the
Levi-Civita symbol for 3, and the octonion imaginary table for 7.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from hyperqm.algebra import structure_constants as _algebra_structure

A_DIMS = (1, 3, 7)

LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_i, _k, _j] = -1.0
LEVI_CIVITA.setflags(write=False)


class GaugeError(ValueError):
    pass


class NonFiniteStateError(RuntimeError):
    """Raised by :func:`integrate`; carries the step index and the samples so far."""

    def __init__(self, step: int, trajectory: "Trajectory"):
        super().__init__(f"non-finite state at step {step}")
        self.step = step
        self.trajectory = trajectory


# -- internal structure ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class InternalStructure:
    a_dim: int
    f: np.ndarray  # (a_dim, a_dim, a_dim), zero-based

    def __post_init__(self):
        f = np.array(self.f, dtype=float)
        f.setflags(write=False)
        object.__setattr__(self, "f", f)

    @property
    def abelian(self) -> bool:
        return not np.any(self.f)

    def is_antisymmetric(self) -> bool:
        f = self.f
        return bool(
            np.array_equal(f, -f.transpose(1, 0, 2))
            and np.array_equal(f, -f.transpose(0, 2, 1))
            and np.array_equal(f, -f.transpose(2, 1, 0))
        )

    def jacobiator(self) -> np.ndarray:
        """``J_abcd = f_abe f_ecd + f_bce f_ead + f_cae f_ebd``."""
        f = self.f
        return (
            np.einsum("abe,ecd->abcd", f, f)
            + np.einsum("bce,ead->abcd", f, f)
            + np.einsum("cae,ebd->abcd", f, f)
        )

    def adjoint(self) -> np.ndarray:
        """Matrices ``(T_a)_bc = -f_abc``, stacked along the first axis."""
        return -self.f


def structure_constants(a_dim: int) -> InternalStructure:
    if a_dim == 1:
        return InternalStructure(1, np.zeros((1, 1, 1)))
    if a_dim == 3:
        return InternalStructure(3, LEVI_CIVITA)
    if a_dim == 7:
        return InternalStructure(7, _algebra_structure(8))
    raise GaugeError(f"internal dimension must be one of {A_DIMS}, got {a_dim}")


# -- potentials ---------------------------------------------------------------


class GaugePotential:
    """Base class; subclasses implement :meth:`value` and may override the
    derivatives with analytic ones.  The defaults use central differences
    with step ``eps``."""

    a_dim: int = 1
    eps: float = 1e-5
    static: bool = False

    def value(self, x: np.ndarray, t: float) -> np.ndarray:
        raise NotImplementedError

    def time_derivative(self, x: np.ndarray, t: float) -> np.ndarray:
        """``d_t A`` with shape ``(..., 3, a_dim)``."""
        if self.static:
            return np.zeros(np.shape(x)[:-1] + (3, self.a_dim))
        h = self.eps
        return (self.value(x, t + h) - self.value(x, t - h)) / (2 * h)

    def gradient(self, x: np.ndarray, t: float) -> np.ndarray:
        """``d_i A_j^a`` with shape ``(..., 3_i, 3_j, a_dim)``."""
        x = np.asarray(x, dtype=float)
        h = self.eps
        parts = []
        for i in range(3):
            step = np.zeros(3)
            step[i] = h
            parts.append((self.value(x + step, t) - self.value(x - step, t)) / (2 * h))
        return np.stack(parts, axis=-3)

    def to_json(self) -> dict:
        raise NotImplementedError


def _points(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (3,):
        raise GaugeError(f"positions need a trailing axis of length 3, got shape {x.shape}")
    return x


class ZeroPotential(GaugePotential):
    static = True

    def __init__(self, a_dim: int = 1):
        structure_constants(a_dim)
        self.a_dim = a_dim

    def value(self, x, t):
        return np.zeros(_points(x).shape[:-1] + (3, self.a_dim))

    def gradient(self, x, t):
        return np.zeros(_points(x).shape[:-1] + (3, 3, self.a_dim))

    def to_json(self):
        return {"a_dim": self.a_dim, "preset": "zero"}


class ConstantMagneticPotential(GaugePotential):
    """Abelian ``A = 1/2 B x r`` giving the uniform field ``B``."""

    a_dim = 1
    static = True

    def __init__(self, b):
        self.b = np.asarray(b, dtype=float)
        if self.b.shape != (3,):
            raise GaugeError("B must be a 3-vector")

    def value(self, x, t):
        return 0.5 * np.cross(self.b, _points(x))[..., None]

    def gradient(self, x, t):
        # d_i (1/2 eps_jkl B_k x_l) = 1/2 eps_jki B_k
        g = 0.5 * np.einsum("jki,k->ij", LEVI_CIVITA, self.b)
        return np.broadcast_to(g[:, :, None], _points(x).shape[:-1] + (3, 3, 1)).copy()

    def to_json(self):
        return {"a_dim": 1, "preset": "constant_b", "B": self.b.tolist()}


class PlaneWavePotential(GaugePotential):
    """``A_j^a = amp * pol_j * n_a * sin(k.x - omega t + phase)`` with ``omega = |k|``.

    ``pol`` must be orthogonal to ``k`` so the wave solves the vacuum
    equations when the internal direction ``n`` is fixed.
    """

    def __init__(self, k, pol, amp: float = 1.0, phase: float = 0.0, a_dim: int = 1, direction=None):
        structure_constants(a_dim)
        self.a_dim = a_dim
        self.k = np.asarray(k, dtype=float)
        self.pol = np.asarray(pol, dtype=float)
        if self.k.shape != (3,) or self.pol.shape != (3,):
            raise GaugeError("k and pol must be 3-vectors")
        if abs(self.k @ self.pol) > 1e-12 * (1 + np.linalg.norm(self.k) * np.linalg.norm(self.pol)):
            raise GaugeError("polarization must be orthogonal to k")
        self.amp = float(amp)
        self.phase = float(phase)
        self.omega = float(np.linalg.norm(self.k))
        n = np.zeros(a_dim)
        n[0] = 1.0
        self.direction = n if direction is None else np.asarray(direction, dtype=float)
        if self.direction.shape != (a_dim,):
            raise GaugeError("internal direction must have length a_dim")

    def _phase(self, x, t):
        return _points(x) @ self.k - self.omega * t + self.phase

    def _shape(self):
        return self.amp * np.multiply.outer(self.pol, self.direction)

    def value(self, x, t):
        return np.sin(self._phase(x, t))[..., None, None] * self._shape()

    def time_derivative(self, x, t):
        return -self.omega * np.cos(self._phase(x, t))[..., None, None] * self._shape()

    def gradient(self, x, t):
        c = np.cos(self._phase(x, t))[..., None, None, None]
        return c * np.multiply.outer(self.k, self._shape())

    def to_json(self):
        return {
            "a_dim": self.a_dim,
            "preset": "plane_wave",
            "k": self.k.tolist(),
            "pol": self.pol.tolist(),
            "amp": self.amp,
            "phase": self.phase,
            "direction": self.direction.tolist(),
        }


class ConstantPotential(GaugePotential):
    """Spatially uniform, time-independent ``A_j^a`` given as a ``(3, a_dim)`` array."""

    static = True

    def __init__(self, a):
        a = np.asarray(a, dtype=float)
        if a.ndim != 2 or a.shape[0] != 3:
            raise GaugeError(f"constant A must have shape (3, a_dim), got {a.shape}")
        structure_constants(a.shape[1])
        self.a = a
        self.a_dim = a.shape[1]

    def value(self, x, t):
        return np.broadcast_to(self.a, _points(x).shape[:-1] + self.a.shape).copy()

    def gradient(self, x, t):
        return np.zeros(_points(x).shape[:-1] + (3, 3, self.a_dim))

    def to_json(self):
        return {"a_dim": self.a_dim, "preset": "constant", "components": {"A": self.a.tolist()}}


def su2_diagonal(c: float) -> ConstantPotential:
    """The constant su(2) family ``A_i^a = c delta_ia``."""
    return ConstantPotential(c * np.eye(3))


class GridPotential(GaugePotential):
    """Static potential sampled on a uniform grid, trilinearly interpolated.

    ``values`` has shape ``(nx, ny, nz, 3, a_dim)``; derivatives use the
    base-class central differences of the interpolant.
    """

    static = True

    def __init__(self, origin, h: float, values):
        self.origin = np.asarray(origin, dtype=float)
        self.h = float(h)
        self.values = np.asarray(values, dtype=float)
        if self.values.ndim != 5 or self.values.shape[3] != 3 or min(self.values.shape[:3]) < 2:
            raise GaugeError("grid values must have shape (nx, ny, nz, 3, a_dim) with n >= 2")
        if self.h <= 0:
            raise GaugeError("grid spacing must be positive")
        self.a_dim = self.values.shape[4]
        structure_constants(self.a_dim)
        self.eps = self.h * 1e-3

    @property
    def upper(self) -> np.ndarray:
        return self.origin + self.h * (np.array(self.values.shape[:3]) - 1)

    def value(self, x, t):
        x = _points(x)
        u = (x - self.origin) / self.h
        n = np.array(self.values.shape[:3])
        tol = 1e-9
        if np.any(u < -tol) or np.any(u > n - 1 + tol):
            raise GaugeError("point outside grid domain")
        u = np.clip(u, 0, n - 1)
        i0 = np.minimum(np.floor(u).astype(int), n - 2)
        w = u - i0
        out = np.zeros(x.shape[:-1] + (3, self.a_dim))
        for corner in np.ndindex(2, 2, 2):
            c = np.array(corner)
            idx = i0 + c
            weight = np.prod(np.where(c == 1, w, 1 - w), axis=-1)
            out += weight[..., None, None] * self.values[idx[..., 0], idx[..., 1], idx[..., 2]]
        return out

    @classmethod
    def sample(cls, pot: GaugePotential, origin, h: float, shape, t: float = 0.0) -> "GridPotential":
        grid = GridSpec(origin, shape, h)
        return cls(grid.origin, h, pot.value(grid.points(), t))

    def to_json(self):
        return {"a_dim": self.a_dim, "preset": "grid", "origin": self.origin.tolist(), "h": self.h}


PRESETS = ("zero", "constant_b", "plane_wave", "constant", "su2_diagonal", "grid")


def potential_from_config(cfg: dict, base_dir: Path | None = None) -> GaugePotential:
    """Build a potential from a JSON-style config dict (see README)."""
    preset = cfg.get("preset")
    a_dim = int(cfg.get("a_dim", 1))
    if preset == "zero":
        return ZeroPotential(a_dim)
    if preset == "constant_b":
        return ConstantMagneticPotential(cfg.get("B", [0.0, 0.0, 1.0]))
    if preset == "plane_wave":
        return PlaneWavePotential(
            cfg["k"],
            cfg["pol"],
            amp=cfg.get("amp", 1.0),
            phase=cfg.get("phase", 0.0),
            a_dim=a_dim,
            direction=cfg.get("direction"),
        )
    if preset == "constant":
        pot = ConstantPotential(cfg["components"]["A"])
        if "a_dim" in cfg and pot.a_dim != a_dim:
            raise GaugeError(f"declared a_dim {a_dim} but A has {pot.a_dim} internal components")
        return pot
    if preset == "su2_diagonal":
        return su2_diagonal(float(cfg.get("c", 1.0)))
    if preset == "grid":
        path = Path(cfg["file"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        with np.load(path) as data:
            return GridPotential(data["origin"], float(data["h"]), data["A"])
    raise GaugeError(f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}")


def load_potential(path: str | Path) -> GaugePotential:
    path = Path(path)
    return potential_from_config(json.loads(path.read_text()), base_dir=path.parent)


# -- fields and forces ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FieldStrength:
    e: np.ndarray  # (..., 3, a_dim)
    b: np.ndarray  # (..., 3, a_dim)


def _cross_internal(f: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``eps_ijk f_abc a_j^b b_k^c`` over trailing ``(3, a_dim)`` axes."""
    return np.einsum("ijk,abc,...jb,...kc->...ia", LEVI_CIVITA, f, a, b)


def _dot_internal(f: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``f_abc a_i^b b_i^c``."""
    return np.einsum("abc,...ib,...ic->...a", f, a, b)


def fields_from_potential(pot: GaugePotential, x, t: float, g: float = 1.0) -> FieldStrength:
    f = structure_constants(pot.a_dim).f
    a = pot.value(x, t)
    grad = pot.gradient(x, t)
    e = -pot.time_derivative(x, t)
    b = np.einsum("ijk,...jka->...ia", LEVI_CIVITA, grad) + 0.5 * g * _cross_internal(f, a, a)
    return FieldStrength(e, b)


@dataclass
class IsospinParticle:
    m: float
    g: float
    x: np.ndarray
    v: np.ndarray
    isospin: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.v = np.asarray(self.v, dtype=float)
        self.isospin = np.atleast_1d(np.asarray(self.isospin, dtype=float))
        if self.m <= 0:
            raise GaugeError("mass must be positive")
        if self.x.shape != (3,) or self.v.shape != (3,):
            raise GaugeError("x and v must be 3-vectors")
        if self.isospin.size not in A_DIMS:
            raise GaugeError(f"isospin length must be one of {A_DIMS}")

    @property
    def a_dim(self) -> int:
        return self.isospin.size

    def state(self) -> np.ndarray:
        return np.concatenate([self.x, self.v, self.isospin])


def lorentz_force(p: IsospinParticle, e: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``g E^a I^a + g v x (B^a I^a)``."""
    e = np.asarray(e, dtype=float)
    b = np.asarray(b, dtype=float)
    if e.shape != (3, p.a_dim) or b.shape != (3, p.a_dim):
        raise GaugeError(f"fields must have shape (3, {p.a_dim})")
    return p.g * (e @ p.isospin) + p.g * np.cross(p.v, b @ p.isospin)


def isospin_rhs(p: IsospinParticle, a: np.ndarray) -> np.ndarray:
    """``dI_a/dt = -g f_abc A_j^b I^c v_j``."""
    a = np.asarray(a, dtype=float)
    if a.shape != (3, p.a_dim):
        raise GaugeError(f"potential values must have shape (3, {p.a_dim})")
    f = structure_constants(p.a_dim).f
    return -p.g * np.einsum("abc,jb,c,j->a", f, a, p.isospin, p.v)


# -- integration --------------------------------------------------------------


@dataclass
class Trajectory:
    dt: float
    a_dim: int
    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    isospin: np.ndarray

    def __len__(self):
        return len(self.t)

    def header(self) -> list[str]:
        return ["t", "x1", "x2", "x3", "v1", "v2", "v3"] + [f"I{a + 1}" for a in range(self.a_dim)]

    def rows(self) -> np.ndarray:
        return np.column_stack([self.t, self.x, self.v, self.isospin])

    def kinetic_energy(self, m: float) -> np.ndarray:
        return 0.5 * m * np.sum(self.v**2, axis=1)

    def isospin_norm(self) -> np.ndarray:
        return np.linalg.norm(self.isospin, axis=1)


def _rhs(pot: GaugePotential, m: float, g: float, f: np.ndarray, a_dim: int, t: float, y: np.ndarray) -> np.ndarray:
    x, v, iso = y[:3], y[3:6], y[6:]
    fs = fields_from_potential(pot, x, t, g)
    force = g * (fs.e @ iso) + g * np.cross(v, fs.b @ iso)
    a = pot.value(x, t)
    diso = -g * np.einsum("abc,jb,c,j->a", f, a, iso, v)
    return np.concatenate([v, force / m, diso])


def integrate(p0: IsospinParticle, pot: GaugePotential, dt: float, steps: int, t0: float = 0.0) -> Trajectory:
    """Fixed-step classical RK4 on ``(x, v, I)``; returns ``steps + 1`` samples."""
    if not dt > 0:
        raise GaugeError("dt must be positive")
    if steps < 1:
        raise GaugeError("need at least one step")
    if pot.a_dim != p0.a_dim:
        raise GaugeError(f"particle has a_dim {p0.a_dim} but potential has {pot.a_dim}")
    f = structure_constants(p0.a_dim).f
    n = 6 + p0.a_dim
    ys = np.empty((steps + 1, n))
    ts = t0 + dt * np.arange(steps + 1)
    ys[0] = p0.state()

    def rhs(t, y):
        return _rhs(pot, p0.m, p0.g, f, p0.a_dim, t, y)

    def pack(k):
        return Trajectory(dt, p0.a_dim, ts[:k], ys[:k, :3], ys[:k, 3:6], ys[:k, 6:])

    y = ys[0]
    for s in range(steps):
        t = ts[s]
        k1 = rhs(t, y)
        k2 = rhs(t + dt / 2, y + dt / 2 * k1)
        k3 = rhs(t + dt / 2, y + dt / 2 * k2)
        k4 = rhs(t + dt, y + dt * k3)
        y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise NonFiniteStateError(s + 1, pack(s + 1))
        ys[s + 1] = y
    return pack(steps + 1)


def cyclotron_period(m: float, g: float, b0: float) -> float:
    return 2 * math.pi * m / (abs(g) * abs(b0))


def measured_period(traj: Trajectory, component: int = 0) -> float:
    """Mean spacing of upward zero crossings of one velocity component."""
    v = traj.v[:, component]
    idx = np.nonzero((v[:-1] < 0) & (v[1:] >= 0))[0]
    if len(idx) < 2:
        raise GaugeError("fewer than two full oscillations in trajectory")
    frac = v[idx] / (v[idx] - v[idx + 1])
    times = traj.t[idx] + frac * traj.dt
    return float((times[-1] - times[0]) / (len(times) - 1))


# -- residuals on grids -------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid of evaluation points; ``tau`` is the time-difference step
    (half the spatial spacing unless given)."""

    origin: tuple[float, float, float]
    shape: tuple[int, int, int]
    h: float
    tau: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "origin", tuple(float(v) for v in self.origin))
        object.__setattr__(self, "shape", tuple(int(v) for v in self.shape))
        if len(self.origin) != 3 or len(self.shape) != 3:
            raise GaugeError("grid origin and shape need three entries")
        if min(self.shape) < 1:
            raise GaugeError("grid too small for central stencil")
        if not self.h > 0:
            raise GaugeError("grid spacing must be positive")

    @property
    def time_step(self) -> float:
        return self.h / 2 if self.tau is None else self.tau

    def points(self) -> np.ndarray:
        axes = [self.origin[i] + self.h * np.arange(self.shape[i]) for i in range(3)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)

    def refined(self) -> "GridSpec":
        """Same physical extent at half the spacing."""
        shape = tuple(2 * (n - 1) + 1 for n in self.shape)
        tau = None if self.tau is None else self.tau / 2
        return GridSpec(self.origin, shape, self.h / 2, tau)


def _spatial_derivative(fn, x: np.ndarray, h: float) -> np.ndarray:
    """Central difference ``d_i F`` stacked on a new axis before the field axes."""
    parts = []
    for i in range(3):
        step = np.zeros(3)
        step[i] = h
        parts.append((fn(x + step) - fn(x - step)) / (2 * h))
    return np.stack(parts, axis=x.ndim - 1)


def _time_derivative(fn, t: float, tau: float) -> np.ndarray:
    return (fn(t + tau) - fn(t - tau)) / (2 * tau)


def _summary(r: np.ndarray, h: float) -> dict:
    r = np.abs(np.asarray(r))
    return {"max": float(r.max()), "mean": float(r.mean()), "h": h}


def field_equation_residuals(pot: GaugePotential, grid: GridSpec, t: float, g: float = 1.0) -> dict[str, np.ndarray]:
    """Homogeneous-equation residuals at every grid point.

    ``R1_a = d_i B_i^a + g f_abc A_i^b B_i^c`` and
    ``R2_ia = d_t B_i^a + eps_ijk (d_j E_k^a + g f_abc A_j^b E_k^c)``.
    Pointwise fields come from :func:`fields_from_potential`; only the outer
    derivatives are central differences.
    """
    f = structure_constants(pot.a_dim).f
    x = grid.points()
    h, tau = grid.h, grid.time_step
    fs = fields_from_potential(pot, x, t, g)
    a = pot.value(x, t)
    div_b = np.einsum("...iia->...a", _spatial_derivative(lambda y: fields_from_potential(pot, y, t, g).b, x, h))
    r1 = div_b + g * _dot_internal(f, a, fs.b)
    grad_e = _spatial_derivative(lambda y: fields_from_potential(pot, y, t, g).e, x, h)
    db_dt = _time_derivative(lambda s: fields_from_potential(pot, x, s, g).b, t, tau)
    r2 = db_dt + np.einsum("ijk,...jka->...ia", LEVI_CIVITA, grad_e) + g * _cross_internal(f, a, fs.e)
    return {"R1": r1, "R2": r2}


@dataclass
class SourceDensities:
    rho: np.ndarray  # (..., a_dim)
    j: np.ndarray  # (..., 3, a_dim)
    four_pi: bool


def _sources_at(pot: GaugePotential, x: np.ndarray, t: float, g: float, h: float, tau: float) -> SourceDensities:
    f = structure_constants(pot.a_dim).f
    fs = fields_from_potential(pot, x, t, g)
    a = pot.value(x, t)
    div_e = np.einsum("...iia->...a", _spatial_derivative(lambda y: fields_from_potential(pot, y, t, g).e, x, h))
    rho = div_e + g * _dot_internal(f, a, fs.e)
    de_dt = _time_derivative(lambda s: fields_from_potential(pot, x, s, g).e, t, tau)
    grad_b = _spatial_derivative(lambda y: fields_from_potential(pot, y, t, g).b, x, h)
    j = -de_dt + np.einsum("ijk,...jka->...ia", LEVI_CIVITA, grad_b) + g * _cross_internal(f, a, fs.b)
    abelian = pot.a_dim == 1
    if abelian:
        rho = rho / (4 * math.pi)
        j = j / (4 * math.pi)
    return SourceDensities(rho, j, abelian)


def source_densities(pot: GaugePotential, grid: GridSpec, t: float, g: float = 1.0) -> SourceDensities:
    """Charge and current densities on the grid.

    For ``a_dim = 1`` both are divided by ``4 pi`` (Gaussian Maxwell form);
    otherwise no such factor is applied.  ``four_pi`` records which.
    """
    return _sources_at(pot, grid.points(), t, g, grid.h, grid.time_step)


def continuity_residual(pot: GaugePotential, grid: GridSpec, t: float, dt: float | None = None, g: float = 1.0) -> np.ndarray:
    """``d_t rho^a + d_i j_i^a`` with central differences, shape ``(..., a_dim)``.

    ``dt`` defaults to the grid's time step, in which case the discrete
    operators commute and the abelian residual vanishes to roundoff.
    """
    h, tau = grid.h, grid.time_step
    dt = tau if dt is None else dt
    if not dt > 0:
        raise GaugeError("dt must be positive")
    x = grid.points()
    drho = _time_derivative(lambda s: _sources_at(pot, x, s, g, h, tau).rho, t, dt)
    div_j = np.einsum("...iia->...a", _spatial_derivative(lambda y: _sources_at(pot, y, t, g, h, tau).j, x, h))
    return drho + div_j


def residual_report(pot: GaugePotential, grid: GridSpec, t: float, g: float = 1.0, dt: float | None = None) -> dict:
    res = field_equation_residuals(pot, grid, t, g)
    src = source_densities(pot, grid, t, g)
    cont = continuity_residual(pot, grid, t, dt, g)
    return {
        "a_dim": pot.a_dim,
        "grid": {"origin": list(grid.origin), "shape": list(grid.shape), "h": grid.h, "tau": grid.time_step},
        "t": t,
        "g": g,
        "residuals": {
            "divergence_b": _summary(res["R1"], grid.h),
            "faraday": _summary(res["R2"], grid.h),
            "continuity": _summary(cont, grid.h),
        },
        "sources": {
            "rho": _summary(src.rho, grid.h),
            "j": _summary(src.j, grid.h),
            "four_pi_applied": src.four_pi,
        },
    }


# -- algebra of the internal generators -----------------------------------------


@dataclass
class AlgebraReport:
    a_dim: int
    abelian: bool
    closure_deviation: float
    jacobiator_max: float
    jacobiator_witness: tuple[int, int, int, int] | None = field(default=None)

    @property
    def closes(self) -> bool:
        return self.closure_deviation == 0.0


def isospin_algebra_check(a_dim: int) -> AlgebraReport:
    """Check ``[T_a, T_b] = f_abc T_c`` for the adjoint matrices and the Jacobiator.

    Indices in the witness are one-based.
    """
    s = structure_constants(a_dim)
    if s.abelian:
        return AlgebraReport(a_dim, True, 0.0, 0.0, None)
    t = s.adjoint()
    comm = np.einsum("aij,bjk->abik", t, t) - np.einsum("bij,ajk->abik", t, t)
    target = np.einsum("abc,cik->abik", s.f, t)
    closure = float(np.max(np.abs(comm - target)))
    jac = s.jacobiator()
    jmax = float(np.max(np.abs(jac)))
    witness = None
    if jmax > 0:
        witness = tuple(int(i) + 1 for i in np.unravel_index(np.argmax(np.abs(jac)), jac.shape))
    return AlgebraReport(a_dim, False, closure, jmax, witness)
