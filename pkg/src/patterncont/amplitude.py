"""Amplitude equations for stripes and hexagons on the hexagonal lattice.

Implements the cubic and quintic amplitude systems for the three lattice
modes ``(A1, A2, A3)``, their symmetry-class equilibria (stripes, up- and
down-hexagons, beans), linear stability of the real/imaginary-split
6-dimensional system, stability-region maps over the ``(c1, c2)`` plane,
and the Ginzburg-Landau kinetic/potential energies of real amplitude
profiles.

Conventions
-----------
* Wavevectors: ``k1 = (1, 0)``, ``k2 = (-1, sqrt(3))/2``,
  ``k3 = (-1, -sqrt(3))/2`` at critical wavenumber 1.
* The split 6-vector is ordered ``(Re A1, Re A2, Re A3, Im A1, Im A2,
  Im A3)``; on real amplitudes the Jacobian then block-diagonalizes into
  a real 3x3 block (symmetric, gradient structure) and a phase block.
* Up-hexagons have ``h > 0``, down-hexagons ``h < 0``; beans are real
  triples ``(A, B, B)`` with ``|A| > |B| > 0``.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Sequence

import numpy as np

logger = logging.getLogger(__name__)

#: eigenvalues with |Re| below this never count as unstable (translation /
#: phase modes of the lattice system sit at 0 up to roundoff)
NEUTRAL_TOL = 1e-8

#: a polynomial root counts as real when |Im| < REAL_ROOT_TOL * (1 + |Re|)
REAL_ROOT_TOL = 1e-10

_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class Coefficients:
    """Parameter set shared by the amplitude systems and the SH equation.

    ``c1`` is the bifurcation parameter, ``c2 .. c5`` the nonlinearity
    coefficients, ``eps`` the amplitude scaling (> 0) and ``c0`` the
    diffusion coefficient of the Ginzburg-Landau extension.  ``c0``
    defaults to half the negative curvature of the dispersion relation
    ``lambda(k) = eps^4 c1 - (1 - k^2)^2`` at ``k = 1``, which is 4.
    """

    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    eps: float = 1.0
    c0: float = 4.0

    def __post_init__(self) -> None:
        vals = (self.c1, self.c2, self.c3, self.c4, self.c5, self.eps, self.c0)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("coefficients must be finite")
        if self.eps <= 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.c0 <= 0:
            raise ValueError(f"c0 must be positive, got {self.c0}")

    def with_c1(self, c1: float) -> "Coefficients":
        return replace(self, c1=float(c1))

    @property
    def nonlinear(self) -> tuple[float, float, float, float, float]:
        return (self.c1, self.c2, self.c3, self.c4, self.c5)


@dataclass(frozen=True)
class AmplitudeVector:
    """The mode triple ``(A1, A2, A3)`` stored as six real components."""

    re1: float
    im1: float
    re2: float
    im2: float
    re3: float
    im3: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in self.components):
            raise ValueError("amplitude components must be finite")

    @property
    def components(self) -> tuple[float, ...]:
        return (self.re1, self.im1, self.re2, self.im2, self.re3, self.im3)

    @classmethod
    def from_complex(cls, a1: complex, a2: complex, a3: complex) -> "AmplitudeVector":
        return cls(a1.real, a1.imag, a2.real, a2.imag, a3.real, a3.imag)

    @classmethod
    def from_real(cls, a1: float, a2: float, a3: float) -> "AmplitudeVector":
        return cls(float(a1), 0.0, float(a2), 0.0, float(a3), 0.0)

    @classmethod
    def zero(cls) -> "AmplitudeVector":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)

    def as_complex(self) -> np.ndarray:
        return np.array(
            [self.re1 + 1j * self.im1, self.re2 + 1j * self.im2, self.re3 + 1j * self.im3]
        )

    def as_real6(self) -> np.ndarray:
        """Split vector ordered ``(re1, re2, re3, im1, im2, im3)``."""
        return np.array([self.re1, self.re2, self.re3, self.im1, self.im2, self.im3])

    @property
    def is_real(self) -> bool:
        return self.im1 == 0.0 and self.im2 == 0.0 and self.im3 == 0.0

    def conj(self) -> "AmplitudeVector":
        return AmplitudeVector(self.re1, -self.im1, self.re2, -self.im2, self.re3, -self.im3)


class EquilibriumClass(Enum):
    ZERO = "zero"
    UPHEX = "up-hexagon"
    STRIPE = "stripe"
    DOWNHEX = "down-hexagon"
    BEAN = "bean"


@dataclass
class StabilityVerdict:
    """Eigenvalues of the split 6x6 Jacobian plus instability bookkeeping."""

    eigenvalues: np.ndarray
    n_unstable: int
    n_neutral: int
    neutral_tol: float
    is_equilibrium: bool

    @property
    def stable(self) -> bool:
        return self.n_unstable == 0


# ---------------------------------------------------------------------------
# right-hand sides
# ---------------------------------------------------------------------------

def _conj(z):
    # works for numpy arrays, python complex and sympy expressions alike
    return z.conjugate()


def _abs2(z):
    return z * z.conjugate()


def _rhs_complex(a, c, order):
    """Right-hand side of the amplitude system in complex form.

    ``a`` is a 3-sequence of complex amplitudes (numbers, arrays or
    symbolic expressions), ``c`` a 5-sequence of coefficients.  ``order``
    selects the cubic (generic coefficients) or quintic system.
    """
    a1, a2, a3 = a
    c1, c2, c3, c4, c5 = c
    if order == 3:
        f1 = c1 * a1 + c2 * _conj(a2) * _conj(a3) + c3 * a1 * _abs2(a1) \
            + c4 * a1 * (_abs2(a2) + _abs2(a3))
        f2 = c1 * a2 + c2 * _conj(a1) * _conj(a3) + c3 * a2 * _abs2(a2) \
            + c4 * a2 * (_abs2(a1) + _abs2(a3))
        f3 = c1 * a3 + c2 * _conj(a1) * _conj(a2) + c3 * a3 * _abs2(a3) \
            + c4 * a3 * (_abs2(a1) + _abs2(a2))
        return [f1, f2, f3]
    if order != 5:
        raise ValueError(f"order must be 3 or 5, got {order}")

    q1, q2, q3 = _abs2(a1), _abs2(a2), _abs2(a3)
    c41 = a1 * a1 * a2 * a3 + (2 * q1 + q2 + q3) * _conj(a2 * a3)
    c42 = a2 * a2 * a1 * a3 + (q1 + 2 * q2 + q3) * _conj(a1 * a3)
    c43 = a3 * a3 * a1 * a2 + (q1 + q2 + 2 * q3) * _conj(a1 * a2)
    c51 = 30 * _conj(a1) * _conj(a2) ** 2 * _conj(a3) ** 2 + 10 * a1 * (
        q1 ** 2 + 3 * q2 ** 2 + 3 * q3 ** 2 + 6 * q1 * q2 + 6 * q1 * q3 + 12 * q2 * q3
    )
    c52 = 30 * _conj(a2) * _conj(a1) ** 2 * _conj(a3) ** 2 + 10 * a2 * (
        3 * q1 ** 2 + q2 ** 2 + 3 * q3 ** 2 + 6 * q1 * q2 + 12 * q1 * q3 + 6 * q2 * q3
    )
    c53 = 30 * _conj(a3) * _conj(a1) ** 2 * _conj(a2) ** 2 + 10 * a3 * (
        3 * q1 ** 2 + 3 * q2 ** 2 + q3 ** 2 + 12 * q1 * q2 + 6 * q1 * q3 + 6 * q2 * q3
    )
    f1 = c1 * a1 + 2 * c2 * _conj(a2) * _conj(a3) + 3 * c3 * a1 * q1 \
        + 6 * c3 * a1 * (q2 + q3) + 12 * c4 * c41 + c5 * c51
    f2 = c1 * a2 + 2 * c2 * _conj(a1) * _conj(a3) + 3 * c3 * a2 * q2 \
        + 6 * c3 * a2 * (q1 + q3) + 12 * c4 * c42 + c5 * c52
    f3 = c1 * a3 + 2 * c2 * _conj(a1) * _conj(a2) + 3 * c3 * a3 * q3 \
        + 6 * c3 * a3 * (q1 + q2) + 12 * c4 * c43 + c5 * c53
    return [f1, f2, f3]


def _rhs(A: AmplitudeVector, co: Coefficients, order: int) -> AmplitudeVector:
    f = _rhs_complex(A.as_complex(), co.nonlinear, order)
    return AmplitudeVector.from_complex(complex(f[0]), complex(f[1]), complex(f[2]))


def rhs3(A: AmplitudeVector, co: Coefficients) -> AmplitudeVector:
    """Cubic amplitude system (generic coefficients c1..c4)."""
    return _rhs(A, co, 3)


def rhs5(A: AmplitudeVector, co: Coefficients) -> AmplitudeVector:
    """Quintic amplitude system including all quartic and quintic couplings."""
    return _rhs(A, co, 5)


def _rhs_real6(x6: np.ndarray, co: Coefficients, order: int) -> np.ndarray:
    """Split right-hand side on 6-vectors ``(re1..re3, im1..im3)``, batched."""
    x6 = np.asarray(x6, dtype=float)
    a = [x6[..., i] + 1j * x6[..., 3 + i] for i in range(3)]
    f = _rhs_complex(a, co.nonlinear, order)
    return np.stack([f[0].real, f[1].real, f[2].real, f[0].imag, f[1].imag, f[2].imag], axis=-1)


# ---------------------------------------------------------------------------
# Jacobians of the split system
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _jacobian_lambdified(order: int):
    """Exact 6x6 Jacobian of the split system, generated symbolically once."""
    import sympy as sp

    xs = sp.symbols("x1 x2 x3 y1 y2 y3", real=True)
    cs = sp.symbols("k1 k2 k3 k4 k5", real=True)
    a = [xs[i] + sp.I * xs[3 + i] for i in range(3)]
    f = _rhs_complex(a, cs, order)
    comps = []
    for fi in f:
        comps.append(sp.expand(fi).as_real_imag())
    split = [comps[0][0], comps[1][0], comps[2][0], comps[0][1], comps[1][1], comps[2][1]]
    jac = [[sp.diff(split[i], xs[j]) for j in range(6)] for i in range(6)]
    return sp.lambdify((*xs, *cs), jac, modules="numpy")


def _jacobian_batch(x6: np.ndarray, co, order: int) -> np.ndarray:
    """Split Jacobians for a batch of 6-vectors; returns shape (..., 6, 6).

    ``co`` is either a :class:`Coefficients` or a 5-tuple whose entries may
    be arrays broadcasting against the batch (used by the stability map,
    where ``c1`` and ``c2`` vary per point).
    """
    x6 = np.asarray(x6, dtype=float)
    fn = _jacobian_lambdified(order)
    cs = co.nonlinear if isinstance(co, Coefficients) else tuple(co)
    args = [x6[..., i] for i in range(6)] + list(cs)
    entries = fn(*args)
    shape = x6.shape[:-1]
    out = np.empty(shape + (6, 6))
    for i in range(6):
        for j in range(6):
            out[..., i, j] = entries[i][j]
    return out


def _check_finite(A: AmplitudeVector) -> None:
    if not all(math.isfinite(v) for v in A.components):
        raise ValueError("non-finite amplitude vector")


def jacobian3(A: AmplitudeVector, co: Coefficients) -> np.ndarray:
    """Exact 6x6 Jacobian of the split cubic system."""
    _check_finite(A)
    return _jacobian_batch(A.as_real6(), co, 3)


def jacobian5(A: AmplitudeVector, co: Coefficients) -> np.ndarray:
    """Exact 6x6 Jacobian of the split quintic system.

    Row/column ordering follows :meth:`AmplitudeVector.as_real6`, i.e.
    ``(Re A1, Re A2, Re A3, Im A1, Im A2, Im A3)``.  At ``A = 0`` this is
    ``c1`` times the identity; on real amplitudes the upper-left 3x3 block
    is the (symmetric) Hessian of the potential energy.
    """
    _check_finite(A)
    return _jacobian_batch(A.as_real6(), co, 5)


# ---------------------------------------------------------------------------
# equilibria
# ---------------------------------------------------------------------------

def _real_roots(coeffs: Sequence[float]) -> np.ndarray:
    """Real roots of a polynomial given by descending coefficients."""
    coeffs = np.asarray(coeffs, dtype=float)
    nz = np.flatnonzero(np.abs(coeffs) > 0)
    if nz.size == 0 or nz[0] == coeffs.size - 1:
        return np.array([])
    coeffs = coeffs[nz[0]:]
    roots = np.roots(coeffs)
    real = roots[np.abs(roots.imag) < REAL_ROOT_TOL * (1 + np.abs(roots.real))].real
    # one Newton polish per root against the exact polynomial
    deriv = np.polyder(coeffs)
    for _ in range(2):
        p = np.polyval(coeffs, real)
        dp = np.polyval(deriv, real)
        step = np.where(np.abs(dp) > 0, p / np.where(dp == 0, 1.0, dp), 0.0)
        real = real - step
    return np.sort(real)


def _hex_poly(co: Coefficients, order: int) -> list[float]:
    if order == 3:
        return [co.c3 + 2 * co.c4, co.c2, co.c1]
    return [340 * co.c5, 60 * co.c4, 15 * co.c3, 2 * co.c2, co.c1]


def _stripe_poly_t(co: Coefficients, order: int) -> list[float]:
    # polynomial in t = s^2
    if order == 3:
        return [co.c3, co.c1]
    return [10 * co.c5, 3 * co.c3, co.c1]


def _hex_amplitudes(co: Coefficients, order: int) -> np.ndarray:
    roots = _real_roots(_hex_poly(co, order))
    return roots[np.abs(roots) > 1e-12]


def _stripe_amplitudes(co: Coefficients, order: int) -> np.ndarray:
    t = _real_roots(_stripe_poly_t(co, order))
    t = t[t > 1e-14]
    s = np.sqrt(t)
    return np.concatenate([-s[::-1], s])


def _bean_residual(ab: np.ndarray, co: Coefficients, order: int) -> np.ndarray:
    """Residual of the (A, B, B) reduction; ab has shape (..., 2)."""
    x6 = np.zeros(ab.shape[:-1] + (6,))
    x6[..., 0] = ab[..., 0]
    x6[..., 1] = ab[..., 1]
    x6[..., 2] = ab[..., 1]
    f = _rhs_real6(x6, co, order)
    return f[..., :2]


def _bean_jacobian(ab: np.ndarray, co: Coefficients, order: int) -> np.ndarray:
    x6 = np.zeros(ab.shape[:-1] + (6,))
    x6[..., 0] = ab[..., 0]
    x6[..., 1] = ab[..., 1]
    x6[..., 2] = ab[..., 1]
    j6 = _jacobian_batch(x6, co, order)
    out = np.empty(ab.shape[:-1] + (2, 2))
    out[..., 0, 0] = j6[..., 0, 0]
    out[..., 0, 1] = j6[..., 0, 1] + j6[..., 0, 2]
    out[..., 1, 0] = j6[..., 1, 0]
    out[..., 1, 1] = j6[..., 1, 1] + j6[..., 1, 2]
    return out


def _bean_equilibria(co: Coefficients, order: int) -> list[tuple[float, float]]:
    """Real (A, B, B) equilibria with |A| > |B| > 0, via seeded Newton."""
    scale = 1.0
    for poly in (_hex_amplitudes(co, order), _stripe_amplitudes(co, order)):
        if poly.size:
            scale = max(scale, 1.5 * np.max(np.abs(poly)))
    grid = np.linspace(-scale, scale, 17)
    seeds = np.array([(a, b) for a in grid for b in grid if abs(b) > 1e-3])

    ab = seeds.copy()
    alive = np.ones(len(ab), dtype=bool)
    for _ in range(60):
        if not alive.any():
            break
        res = _bean_residual(ab[alive], co, order)
        jac = _bean_jacobian(ab[alive], co, order)
        try:
            step = np.linalg.solve(jac, res[..., None])[..., 0]
        except np.linalg.LinAlgError:
            break
        ab[alive] -= step
        bad = ~np.isfinite(ab).all(axis=1) | (np.abs(ab).max(axis=1) > 10 * scale)
        alive &= ~bad
    res = np.full(len(ab), np.inf)
    res[alive] = np.abs(_bean_residual(ab[alive], co, order)).max(axis=1)
    ok = res < _RESIDUAL_TOL

    found: list[tuple[float, float]] = []
    for a, b in ab[ok]:
        # drop stripes (b = 0) and hexagons in either sign gauge (|a| = |b|)
        if abs(b) < 1e-8 or abs(abs(a) - abs(b)) < 1e-8 or abs(a) <= abs(b):
            continue
        if any(abs(a - fa) < 1e-8 and abs(abs(b) - abs(fb)) < 1e-8 for fa, fb in found):
            continue
        found.append((float(a), float(b)))
    return sorted(found)


def scalar_equilibria(
    klass: EquilibriumClass, co: Coefficients, order: int = 5
) -> list[AmplitudeVector]:
    """All real equilibria of the requested symmetry class.

    Stripes come from the quadratic (in ``s^2``) reduction, hexagons from
    the quartic scalar reduction, beans from the two-variable ``(A, B, B)``
    reduction solved by Newton from a coarse seed grid.  Every returned
    vector satisfies ``|rhs| < 1e-10``.  An empty list means the class has
    no real equilibria at these coefficients.
    """
    if order not in (3, 5):
        raise ValueError(f"order must be 3 or 5, got {order}")
    if klass is EquilibriumClass.ZERO:
        return [AmplitudeVector.zero()]
    if klass is EquilibriumClass.STRIPE:
        return [AmplitudeVector.from_real(s, 0.0, 0.0) for s in _stripe_amplitudes(co, order)]
    if klass in (EquilibriumClass.UPHEX, EquilibriumClass.DOWNHEX):
        roots = _hex_amplitudes(co, order)
        roots = roots[roots > 0] if klass is EquilibriumClass.UPHEX else roots[roots < 0]
        return [AmplitudeVector.from_real(h, h, h) for h in roots]
    if klass is EquilibriumClass.BEAN:
        return [AmplitudeVector.from_real(a, b, b) for a, b in _bean_equilibria(co, order)]
    raise ValueError(f"unknown equilibrium class {klass!r}")


# ---------------------------------------------------------------------------
# stability
# ---------------------------------------------------------------------------

def classify_stability(
    A: AmplitudeVector,
    co: Coefficients,
    order: int = 5,
    neutral_tol: float = NEUTRAL_TOL,
) -> StabilityVerdict:
    """Eigenvalues of the split Jacobian with unstable/neutral counts.

    The verdict is computed for any input; ``is_equilibrium`` records
    whether the right-hand side residual is below 1e-8.
    """
    _check_finite(A)
    res = np.abs(_rhs_real6(A.as_real6(), co, order)).max()
    jac = _jacobian_batch(A.as_real6(), co, order)
    try:
        eig = np.linalg.eigvals(jac)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise RuntimeError(f"eigenvalue solver failed for {A}: {exc}") from exc
    eig = eig[np.argsort(-eig.real)]
    n_unstable = int(np.sum(eig.real > neutral_tol))
    n_neutral = int(np.sum(np.abs(eig.real) <= neutral_tol))
    return StabilityVerdict(eig, n_unstable, n_neutral, neutral_tol, bool(res < 1e-8))


# ---------------------------------------------------------------------------
# stability map
# ---------------------------------------------------------------------------

#: default (c1, c2) scan window for stability maps: the smallest round
#: window in which every region class appears for the reference
#: coefficient set (c3, c4, c5) = (-1, 5, -2)
DEFAULT_MAP_WINDOW = ((-1.0, 5.0), (-8.0, 8.0))

REGION_NO_PATTERN = 0
REGION_NONE_STABLE = 1
REGION_HP_MONO = 2
REGION_S_MONO = 3
REGION_HM_MONO = 4
REGION_HP_S = 5
REGION_HM_S = 6
REGION_HP_HM = 7
REGION_TRISTABLE = 8

REGION_NAMES = {
    REGION_NO_PATTERN: "no-pattern",
    REGION_NONE_STABLE: "none-stable",
    REGION_HP_MONO: "H+ mono",
    REGION_S_MONO: "S mono",
    REGION_HM_MONO: "H- mono",
    REGION_HP_S: "H+&S bi",
    REGION_HM_S: "H-&S bi",
    REGION_HP_HM: "H-&H+ bi",
    REGION_TRISTABLE: "tristable",
}

_SUBSET_TO_REGION = {
    (False, False, False): REGION_NONE_STABLE,
    (True, False, False): REGION_HP_MONO,
    (False, True, False): REGION_S_MONO,
    (False, False, True): REGION_HM_MONO,
    (True, True, False): REGION_HP_S,
    (False, True, True): REGION_HM_S,
    (True, False, True): REGION_HP_HM,
    (True, True, True): REGION_TRISTABLE,
}


@dataclass
class StabilityMap:
    """Region classification of the ``(c1, c2)`` plane.

    ``labels[i, j]`` is the region code at ``(c2_axis[i], c1_axis[j])``;
    ``multiplicity[i, j, :]`` counts stable roots per class (H+, S, H-),
    recording e.g. coexisting small- and large-amplitude stable patterns.
    """

    c1_axis: np.ndarray
    c2_axis: np.ndarray
    labels: np.ndarray
    n_stable_classes: np.ndarray
    multiplicity: np.ndarray
    n_failed: int
    order: int

    def region_counts(self) -> dict[str, int]:
        return {
            name: int(np.sum(self.labels == code)) for code, name in REGION_NAMES.items()
        }

    def to_csv(self, path) -> None:
        """Write rows ``c1, c2, label_code, n_stable_classes`` (c2-major)."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["c1", "c2", "label_code", "n_stable_classes"])
            for i, c2 in enumerate(self.c2_axis):
                for j, c1 in enumerate(self.c1_axis):
                    writer.writerow(
                        [f"{c1:.17g}", f"{c2:.17g}",
                         int(self.labels[i, j]), int(self.n_stable_classes[i, j])]
                    )


def write_map_legend(path) -> None:
    """Write the label-code legend that accompanies exported maps."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label_code", "label"])
        for code in sorted(REGION_NAMES):
            writer.writerow([code, REGION_NAMES[code]])


def _batched_real_roots(coeffs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Real roots for a batch of polynomials sharing nonzero leading term.

    ``coeffs`` has shape (m, d+1), descending powers.  Returns (roots,
    mask) of shape (m, d) with invalid entries masked out.
    """
    m, dp1 = coeffs.shape
    d = dp1 - 1
    if d == 0:
        return np.zeros((m, 0)), np.zeros((m, 0), dtype=bool)
    comp = np.zeros((m, d, d))
    idx = np.arange(d - 1)
    comp[:, idx + 1, idx] = 1.0
    comp[:, 0, :] = -coeffs[:, 1:] / coeffs[:, :1]
    roots = np.linalg.eigvals(comp)
    real = np.abs(roots.imag) < REAL_ROOT_TOL * (1 + np.abs(roots.real))
    return roots.real, real


def stability_map(
    c1_range: tuple[float, float],
    c2_range: tuple[float, float],
    resolution: int | tuple[int, int],
    co: Coefficients,
    order: int = 5,
    neutral_tol: float = NEUTRAL_TOL,
) -> StabilityMap:
    """Classify the stable subset of {H+, S, H-} on a ``(c1, c2)`` grid.

    ``co`` supplies the fixed ``c3, c4, c5`` (its ``c1, c2`` are ignored).
    Cells are independent; the whole map is evaluated with batched
    polynomial and eigenvalue solves, so results do not depend on any
    evaluation order.
    """
    if isinstance(resolution, int):
        n1 = n2 = resolution
    else:
        n1, n2 = resolution
    if n1 < 2 or n2 < 2:
        raise ValueError("resolution must be at least 2 per axis")

    c1_axis = np.linspace(c1_range[0], c1_range[1], n1)
    c2_axis = np.linspace(c2_range[0], c2_range[1], n2)
    C1, C2 = np.meshgrid(c1_axis, c2_axis)
    c1f = C1.ravel()
    c2f = C2.ravel()
    ncells = c1f.size

    # hexagon amplitudes: quartic (order 5) or quadratic (order 3) per cell
    if order == 5:
        if co.c5 == 0:
            raise ValueError("order-5 map requires c5 != 0")
        hex_coeffs = np.column_stack(
            [np.full(ncells, 340 * co.c5), np.full(ncells, 60 * co.c4),
             np.full(ncells, 15 * co.c3), 2 * c2f, c1f]
        )
    elif order == 3:
        lead = co.c3 + 2 * co.c4
        if lead == 0:
            raise ValueError("order-3 map requires c3 + 2*c4 != 0")
        hex_coeffs = np.column_stack([np.full(ncells, lead), c2f, c1f])
    else:
        raise ValueError(f"order must be 3 or 5, got {order}")
    hex_roots, hex_ok = _batched_real_roots(hex_coeffs)
    hex_ok &= np.abs(hex_roots) > 1e-12

    # stripe amplitudes from the quadratic/linear reduction in t = s^2
    if order == 5 and co.c5 != 0:
        aq, bq = 10 * co.c5, 3 * co.c3
        disc = bq * bq - 4 * aq * c1f
        sq = np.sqrt(np.maximum(disc, 0.0))
        t_roots = np.stack([(-bq - sq) / (2 * aq), (-bq + sq) / (2 * aq)], axis=1)
        t_ok = (disc[:, None] >= 0) & (t_roots > 1e-14)
    else:
        if co.c3 == 0:
            raise ValueError("order-3 map requires c3 != 0")
        t_roots = (-c1f / co.c3)[:, None]
        t_ok = t_roots > 1e-14
    s_roots = np.sqrt(np.where(t_ok, t_roots, 1.0))

    # assemble every (cell, class, amplitude) into one batch; stability of
    # (s,0,0) and (-s,0,0) coincides, so one stripe representative suffices
    cells: list[np.ndarray] = []
    classes: list[np.ndarray] = []
    vec6: list[np.ndarray] = []

    ih, jh = np.nonzero(hex_ok)
    h = hex_roots[ih, jh]
    x6 = np.zeros((h.size, 6))
    x6[:, 0] = x6[:, 1] = x6[:, 2] = h
    cells.append(ih)
    classes.append(np.where(h > 0, 0, 2))
    vec6.append(x6)

    is_, js = np.nonzero(t_ok)
    s = s_roots[is_, js]
    x6 = np.zeros((s.size, 6))
    x6[:, 0] = s
    cells.append(is_)
    classes.append(np.full(s.size, 1))
    vec6.append(x6)

    cell_idx = np.concatenate(cells)
    class_idx = np.concatenate(classes)
    points = np.concatenate(vec6, axis=0)

    bad = ~np.isfinite(points).all(axis=1)
    n_failed = int(bad.sum())
    keep = ~bad
    cell_idx, class_idx, points = cell_idx[keep], class_idx[keep], points[keep]

    exists = np.zeros((ncells, 3), dtype=np.int16)
    np.add.at(exists, (cell_idx, class_idx), 1)

    if points.shape[0]:
        cs = (c1f[cell_idx], c2f[cell_idx], co.c3, co.c4, co.c5)
        jac = _jacobian_batch(points, cs, order)
        eig = np.linalg.eigvals(jac)
        stable_pt = (eig.real > neutral_tol).sum(axis=1) == 0
    else:
        stable_pt = np.zeros(0, dtype=bool)

    mult = np.zeros((ncells, 3), dtype=np.int16)
    np.add.at(mult, (cell_idx[stable_pt], class_idx[stable_pt]), 1)

    stable = mult > 0
    labels = np.empty(ncells, dtype=np.int8)
    any_exists = exists.sum(axis=1) > 0
    for i in range(ncells):
        if not any_exists[i]:
            labels[i] = REGION_NO_PATTERN
        else:
            labels[i] = _SUBSET_TO_REGION[tuple(stable[i])]
    n_stable = stable.sum(axis=1).astype(np.int8)

    shape = (len(c2_axis), len(c1_axis))
    return StabilityMap(
        c1_axis=c1_axis,
        c2_axis=c2_axis,
        labels=labels.reshape(shape),
        n_stable_classes=n_stable.reshape(shape),
        multiplicity=mult.reshape(shape + (3,)).astype(np.int8),
        n_failed=n_failed,
        order=order,
    )


# ---------------------------------------------------------------------------
# Ginzburg-Landau energies
# ---------------------------------------------------------------------------

def gl_energies(
    A: AmplitudeVector, dA_dx: Sequence[float], co: Coefficients
) -> tuple[float, float, float]:
    """Kinetic, potential and total energy of a real amplitude state.

    The potential is the polynomial whose componentwise gradient is the
    quintic right-hand side on real amplitudes; the kinetic part weights
    the oblique modes with 1/4 through the Ginzburg-Landau diffusion
    coefficients ``(c0, c0/4, c0/4)``.
    """
    if not A.is_real:
        raise ValueError("gl_energies requires a real amplitude vector")
    a1, a2, a3 = A.re1, A.re2, A.re3
    d1, d2, d3 = (float(v) for v in dA_dx)
    ek = 0.5 * co.c0 * (d1 ** 2 + 0.25 * d2 ** 2 + 0.25 * d3 ** 2)
    g4 = a1 ** 3 * a2 * a3 + a1 * a2 ** 3 * a3 + a1 * a2 * a3 ** 3
    g5 = (
        75 * a1 ** 2 * a2 ** 2 * a3 ** 2
        + (5.0 / 3.0) * (a1 ** 6 + a2 ** 6 + a3 ** 6)
        + 15 * (a1 ** 2 * a2 ** 4 + a1 ** 4 * a2 ** 2 + a1 ** 2 * a3 ** 4
                + a1 ** 4 * a3 ** 2 + a2 ** 2 * a3 ** 4 + a2 ** 4 * a3 ** 2)
    )
    ep = (
        0.5 * co.c1 * (a1 ** 2 + a2 ** 2 + a3 ** 2)
        + 2 * co.c2 * a1 * a2 * a3
        + 0.75 * co.c3 * (a1 ** 4 + a2 ** 4 + a3 ** 4)
        + 3 * co.c3 * (a1 ** 2 * a2 ** 2 + a1 ** 2 * a3 ** 2 + a2 ** 2 * a3 ** 2)
        + 12 * co.c4 * g4
        + co.c5 * g5
    )
    return float(ek), float(ep), float(ek + ep)


# ---------------------------------------------------------------------------
# lattice ansatz field
# ---------------------------------------------------------------------------

def ansatz_field(A: AmplitudeVector, co: Coefficients, grid) -> "Field":
    """Sample the three-mode lattice ansatz at wavenumber 1 on a grid.

    ``u(x, y) = 2 eps sum_j [Re A_j cos(k_j . (x, y)) - Im A_j
    sin(k_j . (x, y))]`` with the standard hexagonal wavevectors.  For real
    amplitudes this is the pure cosine ansatz.
    """
    from .pde_systems import Field

    _check_finite(A)
    x = grid.x[:, None]
    y = grid.y[None, :]
    s3 = math.sqrt(3.0)
    phases = [x + 0.0 * y, 0.5 * (-x + s3 * y), 0.5 * (-x - s3 * y)]
    a = A.as_complex()
    u = np.zeros((grid.nx, grid.ny))
    for aj, ph in zip(a, phases):
        u += aj.real * np.cos(ph) - aj.imag * np.sin(ph)
    return Field(values=2.0 * co.eps * u[None, :, :])
