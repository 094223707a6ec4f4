"""Steady-state discretizations on Neumann rectangles.

Two concrete systems are provided: a generalized Swift-Hohenberg equation
(one component) and a semi-arid vegetation model (vegetation density ``n``
and ground water ``w``).  Fields live on the rectangle
``(-lx, lx) x (-ly, ly)`` and are discretized by cosine-basis collocation
at midpoint nodes: derivatives are spectral, nonlinearities pointwise, and
homogeneous Neumann conditions are satisfied exactly by every basis
function.  The module also contains homogeneous-state enumeration and
dispersion (Turing) analysis for both systems, and the text file format
used to exchange fields with the CLI and the plotting tools.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .amplitude import Coefficients
from .errors import SingularInputError

logger = logging.getLogger(__name__)

#: refuse to assemble operators beyond this size (bytes)
MAX_ASSEMBLY_BYTES = 2 * 1024 ** 3


def _nice_size(n: float, minimum: int = 8) -> int:
    """Round up to a multiple of four, at least ``minimum``."""
    return max(minimum, int(4 * math.ceil(n / 4.0)))


def default_resolution(length: float, kc: float = 1.0) -> int:
    """Default sample count for a half-length: 8 points per ``2*pi/kc``."""
    return _nice_size(8.0 * length * kc / math.pi)


@dataclass
class Grid:
    """Collocation grid on ``(-lx, lx) x (-ly, ly)`` with Neumann BCs.

    Samples sit at cell midpoints ``x_j = -lx + (j + 1/2) hx``; the cosine
    modes ``cos(k pi (x + lx) / (2 lx))`` all have vanishing normal
    derivative on the boundary.  Derivative matrices and assembled
    operators are built lazily and cached; treat instances as immutable.
    """

    lx: float
    ly: float
    nx: int
    ny: int

    def __post_init__(self) -> None:
        if self.lx <= 0 or self.ly <= 0:
            raise ValueError("domain half-lengths must be positive")
        if self.nx < 4 or self.ny < 4:
            raise ValueError(f"grid too coarse: nx={self.nx}, ny={self.ny} (need >= 4)")

    @classmethod
    def for_domain(
        cls, lx: float, ly: float, kc: float = 1.0,
        nx: int | None = None, ny: int | None = None,
    ) -> "Grid":
        return cls(lx, ly, nx or default_resolution(lx, kc), ny or default_resolution(ly, kc))

    def refined(self, factor: float = 1.5) -> "Grid":
        return Grid(self.lx, self.ly, _nice_size(self.nx * factor), _nice_size(self.ny * factor))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    @property
    def area(self) -> float:
        return 4.0 * self.lx * self.ly

    @cached_property
    def x(self) -> np.ndarray:
        h = 2 * self.lx / self.nx
        return -self.lx + (np.arange(self.nx) + 0.5) * h

    @cached_property
    def y(self) -> np.ndarray:
        h = 2 * self.ly / self.ny
        return -self.ly + (np.arange(self.ny) + 0.5) * h

    # -- per-axis spectral machinery -----------------------------------
    def _axis(self, length: float, n: int, coord: np.ndarray):
        omega = np.arange(n) * math.pi / (2 * length)
        phase = np.outer(coord + length, omega)
        cos = np.cos(phase)
        sin = np.sin(phase)
        scale = np.full(n, 2.0 / n)
        scale[0] = 1.0 / n
        analysis = (cos * scale).T
        return omega, cos, sin, analysis

    @cached_property
    def _x_ops(self):
        return self._axis(self.lx, self.nx, self.x)

    @cached_property
    def _y_ops(self):
        return self._axis(self.ly, self.ny, self.y)

    def _deriv(self, axis_ops, order: int) -> np.ndarray:
        omega, cos, sin, analysis = axis_ops
        sign = (-1.0) ** ((order + 1) // 2)
        basis = cos if order % 2 == 0 else sin
        return sign * (basis * omega ** order) @ analysis

    @cached_property
    def dx1(self) -> np.ndarray:
        return self._deriv(self._x_ops, 1)

    @cached_property
    def dx2(self) -> np.ndarray:
        return self._deriv(self._x_ops, 2)

    @cached_property
    def dx3(self) -> np.ndarray:
        return self._deriv(self._x_ops, 3)

    @cached_property
    def dy1(self) -> np.ndarray:
        return self._deriv(self._y_ops, 1)

    @cached_property
    def dy2(self) -> np.ndarray:
        return self._deriv(self._y_ops, 2)

    def laplacian(self, u: np.ndarray) -> np.ndarray:
        """Apply the Laplacian to samples of shape (nx, ny)."""
        return self.dx2 @ u + u @ self.dy2.T

    # -- assembled operators -------------------------------------------
    def _check_assembly(self, n: int) -> None:
        need = n * n * 8
        if need > MAX_ASSEMBLY_BYTES:
            raise MemoryError(
                f"assembled operator needs {need / 1e9:.2f} GB "
                f"({n} x {n} dense), above the {MAX_ASSEMBLY_BYTES / 1e9:.2f} GB limit"
            )

    @cached_property
    def lap_matrix(self) -> np.ndarray:
        """Dense Laplacian on flattened (nx*ny,) vectors, C-order."""
        n = self.nx * self.ny
        self._check_assembly(n)
        return np.kron(self.dx2, np.eye(self.ny)) + np.kron(np.eye(self.nx), self.dy2)

    @cached_property
    def helmholtz_sq_matrix(self) -> np.ndarray:
        """Assembled ``(1 + Laplacian)^2``; symmetric by construction."""
        n = self.nx * self.ny
        self._check_assembly(n)
        m = self.lap_matrix + np.eye(n)
        return m @ m

    def resample(self, values: np.ndarray, target: "Grid") -> np.ndarray:
        """Spectrally interpolate component samples onto another grid."""
        coeff = self._x_ops[3] @ values @ self._y_ops[3].T
        out = np.zeros((target.nx, target.ny))
        kx = min(self.nx, target.nx)
        ky = min(self.ny, target.ny)
        out[:kx, :ky] = coeff[:kx, :ky]
        return target._x_ops[1] @ out @ target._y_ops[1].T


@dataclass
class Field:
    """Real samples on a grid, one (nx, ny) array per component."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.ndim == 2:
            v = v[None, :, :]
        if v.ndim != 3:
            raise ValueError(f"field values must be (ncomp, nx, ny), got shape {v.shape}")
        if not np.isfinite(v).all():
            raise ValueError("field contains non-finite samples")
        object.__setattr__(self, "values", v)

    @property
    def n_components(self) -> int:
        return self.values.shape[0]

    @classmethod
    def constant(cls, grid: Grid, *component_values: float) -> "Field":
        vals = np.empty((len(component_values), grid.nx, grid.ny))
        for i, c in enumerate(component_values):
            vals[i] = c
        return cls(vals)

    @classmethod
    def zeros(cls, grid: Grid, n_components: int = 1) -> "Field":
        return cls(np.zeros((n_components, grid.nx, grid.ny)))

    def flat(self) -> np.ndarray:
        return self.values.ravel()

    @classmethod
    def from_flat(cls, vec: np.ndarray, grid: Grid, n_components: int) -> "Field":
        return cls(np.asarray(vec, dtype=float).reshape(n_components, grid.nx, grid.ny))


# ---------------------------------------------------------------------------
# generalized Swift-Hohenberg equation
# ---------------------------------------------------------------------------

def _sh_linear(u: np.ndarray, co: Coefficients, grid: Grid, c1: float) -> np.ndarray:
    lap = grid.laplacian(u)
    bilap = grid.laplacian(lap)
    return co.eps ** 4 * c1 * u - (u + 2 * lap + bilap)


def _sh_nonlinear(u: np.ndarray, co: Coefficients) -> np.ndarray:
    e = co.eps
    return e ** 3 * co.c2 * u ** 2 + e ** 2 * co.c3 * u ** 3 \
        + e * co.c4 * u ** 4 + co.c5 * u ** 5


def _sh_potential_deriv(u: np.ndarray, co: Coefficients) -> np.ndarray:
    e = co.eps
    return 2 * e ** 3 * co.c2 * u + 3 * e ** 2 * co.c3 * u ** 2 \
        + 4 * e * co.c4 * u ** 3 + 5 * co.c5 * u ** 4


def sh_residual(u: Field, co: Coefficients, grid: Grid) -> Field:
    """Steady residual ``[eps^4 c1 - (1+Lap)^2] u + nonlinearity``."""
    if u.n_components != 1:
        raise ValueError("Swift-Hohenberg fields have one component")
    w = u.values[0]
    return Field(_sh_linear(w, co, grid, co.c1) + _sh_nonlinear(w, co))


@dataclass
class LinearizedOperator:
    """Linearization bundle: fast apply plus an assembled dense matrix."""

    apply: Callable[[np.ndarray], np.ndarray]
    matrix: np.ndarray

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return self.apply(v)


def sh_jacobian(u: Field, co: Coefficients, grid: Grid) -> LinearizedOperator:
    """Linearization of the SH residual around ``u``.

    The apply form acts on (nx, ny) sample arrays; the assembled form is a
    dense symmetric matrix on flattened vectors (spectral Laplacians are
    dense in physical space).
    """
    if u.n_components != 1:
        raise ValueError("Swift-Hohenberg fields have one component")
    w = u.values[0]
    pot = _sh_potential_deriv(w, co)

    def apply(v: np.ndarray) -> np.ndarray:
        return _sh_linear(v, co, grid, co.c1) + pot * v

    n = grid.nx * grid.ny
    grid._check_assembly(n)
    mat = -grid.helmholtz_sq_matrix.copy()
    diag = mat.ravel()[:: n + 1]
    diag += co.eps ** 4 * co.c1 + pot.ravel()
    return LinearizedOperator(apply=apply, matrix=mat)


# ---------------------------------------------------------------------------
# vegetation model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VegParams:
    """Constants of the vegetation model; ``p`` is the precipitation control."""

    gamma: float = 1.6
    sigma: float = 1.6
    nu: float = 0.2
    rho: float = 1.5
    beta: float = 3.0
    delta: float = 100.0
    p: float = 0.3

    def __post_init__(self) -> None:
        if self.delta <= 0:
            raise ValueError(f"delta must be positive, got {self.delta}")

    def with_p(self, p: float) -> "VegParams":
        from dataclasses import replace

        return replace(self, p=float(p))


def _veg_kinetics(n, w, vp: VegParams, p: float):
    growth = vp.gamma * w / (1.0 + vp.sigma * w)
    f1 = (growth - vp.nu) * n - n ** 2
    f2 = p - (1.0 - vp.rho * n) * w - w ** 2 * n
    return f1, f2


def _veg_kinetics_jac(n, w, vp: VegParams):
    denom = 1.0 + vp.sigma * w
    a11 = vp.gamma * w / denom - vp.nu - 2.0 * n
    a12 = vp.gamma * n / denom ** 2
    a21 = vp.rho * w - w ** 2
    a22 = -(1.0 - vp.rho * n) - 2.0 * w * n
    return a11, a12, a21, a22


def veg_residual(uv: Field, vp: VegParams, grid: Grid) -> Field:
    """Steady residual of the vegetation model for components ``(n, w)``."""
    if uv.n_components != 2:
        raise ValueError("vegetation fields have two components (n, w)")
    n, w = uv.values
    if np.min(np.abs(1.0 + vp.sigma * w)) < 1e-12:
        raise SingularInputError("1 + sigma*w vanishes somewhere on the grid")
    f1, f2 = _veg_kinetics(n, w, vp, vp.p)
    r1 = grid.laplacian(n) + f1
    r2 = vp.delta * grid.laplacian(w - vp.beta * n) + f2
    return Field(np.stack([r1, r2]))


# ---------------------------------------------------------------------------
# steady systems for the continuation driver
# ---------------------------------------------------------------------------

class SwiftHohenberg:
    """SH steady problem with ``c1`` as continuation parameter."""

    name = "sh"
    n_components = 1
    param_name = "c1"
    symmetric = True

    def __init__(self, co: Coefficients):
        self.co = co

    def coefficients_at(self, param: float) -> Coefficients:
        return self.co.with_c1(param)

    def residual_flat(self, u: np.ndarray, param: float, grid: Grid) -> np.ndarray:
        w = u.reshape(grid.shape)
        out = _sh_linear(w, self.co, grid, param) + _sh_nonlinear(w, self.co)
        return out.ravel()

    def jacobian_flat(self, u: np.ndarray, param: float, grid: Grid) -> np.ndarray:
        w = u.reshape(grid.shape)
        n = u.size
        grid._check_assembly(n)
        mat = -grid.helmholtz_sq_matrix.copy()
        diag = mat.ravel()[:: n + 1]
        diag += self.co.eps ** 4 * param + _sh_potential_deriv(w, self.co).ravel()
        return mat

    def residual_dparam(self, u: np.ndarray, param: float, grid: Grid) -> np.ndarray:
        return self.co.eps ** 4 * u


class Vegetation:
    """Vegetation steady problem with precipitation ``p`` as parameter."""

    name = "veg"
    n_components = 2
    param_name = "p"
    symmetric = False

    def __init__(self, vp: VegParams):
        self.vp = vp

    def residual_flat(self, u: np.ndarray, param: float, grid: Grid) -> np.ndarray:
        n, w = u.reshape(2, *grid.shape)
        if np.min(np.abs(1.0 + self.vp.sigma * w)) < 1e-12:
            raise SingularInputError("1 + sigma*w vanishes somewhere on the grid")
        f1, f2 = _veg_kinetics(n, w, self.vp, param)
        r1 = grid.laplacian(n) + f1
        r2 = self.vp.delta * grid.laplacian(w - self.vp.beta * n) + f2
        return np.concatenate([r1.ravel(), r2.ravel()])

    def jacobian_flat(self, u: np.ndarray, param: float, grid: Grid) -> np.ndarray:
        vp = self.vp
        n, w = u.reshape(2, *grid.shape)
        nn = n.size
        grid._check_assembly(2 * nn)
        a11, a12, a21, a22 = _veg_kinetics_jac(n.ravel(), w.ravel(), vp)
        lap = grid.lap_matrix
        jac = np.zeros((2 * nn, 2 * nn))
        jac[:nn, :nn] = lap
        jac[nn:, :nn] = -vp.delta * vp.beta * lap
        jac[nn:, nn:] = vp.delta * lap
        idx = np.arange(nn)
        jac[idx, idx] += a11
        jac[idx, nn + idx] += a12
        jac[nn + idx, idx] += a21
        jac[nn + idx, nn + idx] += a22
        return jac

    def residual_dparam(self, u: np.ndarray, param: float, grid: Grid) -> np.ndarray:
        out = np.zeros_like(u)
        out[u.size // 2:] = 1.0
        return out


# ---------------------------------------------------------------------------
# homogeneous states and dispersion analysis
# ---------------------------------------------------------------------------

@dataclass
class HomogeneousState:
    """Constant state with its kinetics eigenvalues."""

    n: float
    w: float
    eigenvalues: np.ndarray
    residual: float

    @property
    def stable(self) -> bool:
        return bool(np.max(self.eigenvalues.real) < 0)

    @property
    def trivial(self) -> bool:
        return abs(self.n) < 1e-12


@dataclass
class TuringPoint:
    """Parameter value where a finite-wavenumber mode becomes marginal."""

    p_c: float
    k_c: float


def _veg_scalar_equation(n: float, vp: VegParams, p: float) -> float:
    w = (n + vp.nu) / (vp.gamma - vp.sigma * (n + vp.nu))
    return p - (1.0 - vp.rho * n) * w - w ** 2 * n


def veg_homogeneous(vp: VegParams, p: float | None = None) -> list[HomogeneousState]:
    """All real constant states of the kinetics, with 2x2 eigenvalues.

    The trivial state is ``(0, p)``.  Nontrivial states are located by
    eliminating ``w`` through the growth balance, bracketing the remaining
    scalar equation on ``n in [0, 10]`` and polishing with Newton on the
    full kinetics to 1e-12.
    """
    p = vp.p if p is None else float(p)
    states: list[tuple[float, float]] = [(0.0, p)]

    pole = vp.gamma / vp.sigma - vp.nu
    ns = np.linspace(1e-9, 10.0, 4001)
    denom = vp.gamma - vp.sigma * (ns + vp.nu)
    vals = np.full_like(ns, np.nan)
    ok = np.abs(denom) > 1e-8
    vals[ok] = [_veg_scalar_equation(n, vp, p) for n in ns[ok]]
    for i in range(len(ns) - 1):
        if not (np.isfinite(vals[i]) and np.isfinite(vals[i + 1])):
            continue
        if vals[i] == 0.0:
            root = ns[i]
        elif vals[i] * vals[i + 1] < 0 and not (ns[i] < pole < ns[i + 1]):
            root = brentq(_veg_scalar_equation, ns[i], ns[i + 1], args=(vp, p), xtol=1e-13)
        else:
            continue
        w = (root + vp.nu) / (vp.gamma - vp.sigma * (root + vp.nu))
        states.append((float(root), float(w)))

    out: list[HomogeneousState] = []
    for n0, w0 in states:
        nv, wv = n0, w0
        for _ in range(50):  # Newton polish on the 2-variable kinetics
            f1, f2 = _veg_kinetics(nv, wv, vp, p)
            if max(abs(f1), abs(f2)) < 1e-13:
                break
            a11, a12, a21, a22 = _veg_kinetics_jac(nv, wv, vp)
            det = a11 * a22 - a12 * a21
            if abs(det) < 1e-14:
                break
            nv -= (a22 * f1 - a12 * f2) / det
            wv -= (-a21 * f1 + a11 * f2) / det
        f1, f2 = _veg_kinetics(nv, wv, vp, p)
        res = max(abs(f1), abs(f2))
        if res > 1e-10:
            continue
        if any(abs(nv - s.n) < 1e-8 and abs(wv - s.w) < 1e-8 for s in out):
            continue
        a11, a12, a21, a22 = _veg_kinetics_jac(nv, wv, vp)
        eig = np.linalg.eigvals(np.array([[a11, a12], [a21, a22]]))
        out.append(HomogeneousState(nv, wv, eig, res))
    return out


def default_k_range(system: str) -> np.ndarray:
    lo = 0.01 if system == "veg" else 0.1
    return np.linspace(lo, 2.0, 400)


def _veg_dispersion(k2: float, state: HomogeneousState, vp: VegParams) -> float:
    a11, a12, a21, a22 = _veg_kinetics_jac(state.n, state.w, vp)
    mat = np.array(
        [[a11 - k2, a12],
         [a21 + k2 * vp.delta * vp.beta, a22 - k2 * vp.delta]]
    )
    return float(np.max(np.linalg.eigvals(mat).real))


def dispersion_max(
    state, system: str, params, k_range: Sequence[float] | None = None
) -> tuple[float, float]:
    """Maximize the linear growth rate over wavenumbers.

    For the vegetation model the growth rate at wavenumber ``k`` is the
    largest real part of the kinetics Jacobian minus ``k^2`` times the
    diffusion matrix ``[[1, 0], [-delta*beta, delta]]``.  For SH around a
    constant ``u`` it is ``eps^4 c1 - (1 - k^2)^2`` plus the potential
    derivative at ``u``.  Returns ``(k_star, max real part)`` after
    golden-section refinement of the grid maximizer.
    """
    if k_range is None:
        k_range = default_k_range(system)
    ks = np.asarray(k_range, dtype=float)
    if ks.size == 0:
        raise ValueError("k_range must not be empty")

    if system == "sh":
        co: Coefficients = params
        u0 = float(state)

        def rate(k: float) -> float:
            shift = _sh_potential_deriv(np.array(u0), co)
            return float(co.eps ** 4 * co.c1 - (1 - k ** 2) ** 2 + shift)
    elif system == "veg":
        vp: VegParams = params

        def rate(k: float) -> float:
            return _veg_dispersion(k * k, state, vp)
    else:
        raise ValueError(f"unknown system {system!r}")

    vals = np.array([rate(k) for k in ks])
    i = int(np.argmax(vals))
    if ks.size == 1:
        return float(ks[0]), float(vals[0])
    lo = ks[max(i - 1, 0)]
    hi = ks[min(i + 1, ks.size - 1)]
    if i == 0 or i == ks.size - 1:
        return float(ks[i]), float(vals[i])
    res = minimize_scalar(lambda k: -rate(k), bracket=(lo, ks[i], hi), method="golden",
                          options={"xtol": 1e-10})
    return float(res.x), float(-res.fun)


def _veg_nontrivial_at(vp: VegParams, p: float, near: float | None = None) -> HomogeneousState | None:
    cands = [s for s in veg_homogeneous(vp, p) if not s.trivial and s.n > 0]
    if not cands:
        return None
    if near is None:
        return max(cands, key=lambda s: s.n)
    return min(cands, key=lambda s: abs(s.n - near))


def turing_locus(
    vp: VegParams, p_range: tuple[float, float], n_samples: int = 80
) -> list[TuringPoint]:
    """Parameter values where the nontrivial branch changes Turing stability.

    Scans the growth-rate maximum along the nontrivial homogeneous branch
    and bisects each sign change to 1e-4 in ``p``; every located point
    carries the critical wavenumber of the marginal mode.  An empty list
    means no sign change on the range.
    """
    ps = np.linspace(p_range[0], p_range[1], n_samples)
    branch: list[tuple[float, HomogeneousState]] = []
    near = None
    for p in ps:
        st = _veg_nontrivial_at(vp, p, near)
        if st is None:
            continue
        near = st.n
        branch.append((p, st))

    def growth(p: float, near_n: float) -> tuple[float, float]:
        st = _veg_nontrivial_at(vp, p, near_n)
        if st is None:
            raise ValueError(f"nontrivial branch lost at p={p}")
        k, val = dispersion_max(st, "veg", vp)
        return val, k

    points: list[TuringPoint] = []
    for (p0, s0), (p1, s1) in zip(branch[:-1], branch[1:]):
        g0, _ = growth(p0, s0.n)
        g1, _ = growth(p1, s1.n)
        if g0 == 0.0:
            _, k0 = growth(p0, s0.n)
            points.append(TuringPoint(p0, k0))
            continue
        if g0 * g1 > 0:
            continue
        lo, hi = p0, p1
        ref = s0.n
        while hi - lo > 1e-4:
            mid = 0.5 * (lo + hi)
            gm, _ = growth(mid, ref)
            if g0 * gm <= 0:
                hi = mid
            else:
                lo = mid
        pc = 0.5 * (lo + hi)
        _, kc = growth(pc, ref)
        points.append(TuringPoint(float(pc), float(kc)))
    return points


# ---------------------------------------------------------------------------
# field file format
# ---------------------------------------------------------------------------

def save_field(path, field: Field, grid: Grid, system: str) -> None:
    """Write a field as text: two header lines, then CSV rows per grid row."""
    with open(path, "w") as fh:
        fh.write(f"# system={system}\n")
        fh.write(
            f"# nx={grid.nx} ny={grid.ny} lx={grid.lx:.17g} ly={grid.ly:.17g} "
            f"components={field.n_components}\n"
        )
        for comp in field.values:
            for row in comp:
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


_HEADER_RE = re.compile(
    r"#\s*nx=(\d+)\s+ny=(\d+)\s+lx=([^\s]+)\s+ly=([^\s]+)\s+components=(\d+)"
)


def load_field(path) -> tuple[Field, Grid, str]:
    """Read a field file; returns the field, its grid and the system id."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if len(lines) < 2 or not lines[0].startswith("# system="):
        raise ValueError(f"{path}: missing field file header")
    system = lines[0].split("=", 1)[1].strip()
    m = _HEADER_RE.match(lines[1])
    if not m:
        raise ValueError(f"{path}: malformed geometry header: {lines[1]!r}")
    nx, ny = int(m.group(1)), int(m.group(2))
    lx, ly = float(m.group(3)), float(m.group(4))
    ncomp = int(m.group(5))
    data = [
        [float(tok) for tok in line.split(",")]
        for line in lines[2:]
        if line.strip()
    ]
    arr = np.array(data)
    if arr.shape != (ncomp * nx, ny):
        raise ValueError(
            f"{path}: expected {ncomp * nx} rows of {ny} values, got shape {arr.shape}"
        )
    grid = Grid(lx, ly, nx, ny)
    return Field(arr.reshape(ncomp, nx, ny)), grid, system


# ---------------------------------------------------------------------------
# lattice profiles for seeding
# ---------------------------------------------------------------------------

def hex_lattice_profile(grid: Grid, kc: float, a1: float, a2: float, a3: float) -> np.ndarray:
    """Three-mode cosine lattice sampled on the grid at wavenumber ``kc``."""
    x = grid.x[:, None]
    y = grid.y[None, :]
    s3 = math.sqrt(3.0)
    return (
        a1 * np.cos(kc * x) * np.ones_like(y)
        + a2 * np.cos(0.5 * kc * (-x + s3 * y))
        + a3 * np.cos(0.5 * kc * (-x - s3 * y))
    )
