"""Conserved-quantity diagnostics for stationary SH states.

For steady states of the generalized Swift-Hohenberg equation a spatial
Hamiltonian is conserved along the x-direction; together with the
potential energy of the amplitude formalism it locates Maxwell points,
the parameter values where two competing patterns can support a
stationary front.

The printed Hamiltonian density uses the bare coefficients ``c1 .. c5``
(the ``eps = 1`` form); actual steady states of the eps-scaled equation
conserve the variant whose potential uses ``(eps^4 c1, eps^3 c2,
eps^2 c3, eps c4, c5)``.  Both are available through ``scaled``; the bare
form is the default, conservation tests and Maxwell points use the scaled
one.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass

import numpy as np

from . import amplitude as am
from .amplitude import AmplitudeVector, Coefficients, EquilibriumClass
from .continuation import Continuation, ContinuationSettings, mode_amplitudes
from .errors import BracketError, ConvergenceError, SingularSolveError
from .pde_systems import Field, Grid, SwiftHohenberg

logger = logging.getLogger(__name__)

PATTERN_CLASSES = (EquilibriumClass.UPHEX, EquilibriumClass.STRIPE, EquilibriumClass.DOWNHEX)

_CLASS_COLUMNS = {
    EquilibriumClass.UPHEX: "Hplus",
    EquilibriumClass.STRIPE: "S",
    EquilibriumClass.DOWNHEX: "Hminus",
}


def _potential_coefficients(co: Coefficients, scaled: bool) -> tuple[float, ...]:
    if scaled:
        e = co.eps
        return (e ** 4 * co.c1, e ** 3 * co.c2, e ** 2 * co.c3, e * co.c4, co.c5)
    return (co.c1, co.c2, co.c3, co.c4, co.c5)


def hamiltonian_profile(
    u: Field, co: Coefficients, grid: Grid, scaled: bool = False
) -> np.ndarray:
    """Transverse integral of the spatial Hamiltonian density per x-column.

    The density combines second/third x-derivatives, transverse
    derivatives and the potential ``F(u) = (c1 - 1)/2 u^2 + c2/3 u^3 +
    c3/4 u^4 + c4/5 u^5 + c5/6 u^6``; derivatives are spectral and the
    y-integral uses the midpoint rule (exact for the cosine basis).  For a
    steady state the result is constant in x (with ``scaled=True`` when
    ``eps != 1``).
    """
    if u.n_components != 1:
        raise ValueError("hamiltonian_profile expects a one-component SH field")
    if grid.nx < 8:
        raise ValueError(f"grid too coarse for third x-derivatives: nx={grid.nx}")
    w = u.values[0]
    ux = grid.dx1 @ w
    uxx = grid.dx2 @ w
    uxxx = grid.dx3 @ w
    uy = w @ grid.dy1.T
    uyy = w @ grid.dy2.T
    uxy = ux @ grid.dy1.T

    b1, b2, b3, b4, b5 = _potential_coefficients(co, scaled)
    f = (0.5 * (b1 - 1.0) * w ** 2 + b2 / 3.0 * w ** 3 + b3 / 4.0 * w ** 4
         + b4 / 5.0 * w ** 5 + b5 / 6.0 * w ** 6)
    density = (0.5 * uxx ** 2 - uxxx * ux - ux ** 2 + uxy ** 2
               + uy ** 2 - 0.5 * uyy ** 2 + f)
    hy = 2.0 * grid.ly / grid.ny
    return hy * density.sum(axis=1)


def hamiltonian_value(u: Field, co: Coefficients, grid: Grid, scaled: bool = True) -> float:
    """Branch value of the Hamiltonian: median over x-columns."""
    return float(np.median(hamiltonian_profile(u, co, grid, scaled=scaled)))


# ---------------------------------------------------------------------------
# pattern states on a minimal cell
# ---------------------------------------------------------------------------

def minimal_cell(nx: int = 24, ny: int = 12) -> Grid:
    """One hexagonal lattice period: ``lx = 2 pi``, ``ly = 2 pi / sqrt(3)``."""
    return Grid(lx=2 * math.pi, ly=2 * math.pi / math.sqrt(3.0), nx=nx, ny=ny)


def select_branch_root(
    klass: EquilibriumClass, co: Coefficients, order: int = 5
) -> AmplitudeVector | None:
    """Representative branch amplitude: stable roots first, largest last."""
    eqs = am.scalar_equilibria(klass, co, order)
    if not eqs:
        return None
    ranked = []
    for e in eqs:
        verdict = am.classify_stability(e, co, order)
        ranked.append((verdict.stable, abs(e.re1), e))
    stable = [r for r in ranked if r[0]]
    pool = stable or ranked
    return max(pool, key=lambda r: r[1])[2]


def _class_matches(klass: EquilibriumClass, a: float, b: float, tol: float = 0.25) -> bool:
    scale = max(abs(a), abs(b), 1e-12)
    if klass is EquilibriumClass.STRIPE:
        return abs(b) < tol * scale and abs(a) > 0
    if klass is EquilibriumClass.UPHEX:
        return b > 0 and abs(a - b) < tol * scale
    if klass is EquilibriumClass.DOWNHEX:
        return b < 0 and abs(a - b) < tol * scale
    return True


def pattern_state(
    klass: EquilibriumClass,
    co: Coefficients,
    c1: float,
    grid: Grid | None = None,
    settings: ContinuationSettings | None = None,
):
    """Converge the pure pattern of a class on a (minimal) Neumann cell.

    Seeds Newton with the lattice ansatz at the representative amplitude
    and verifies via mode projections that the converged state still
    belongs to the requested class.  Returns ``None`` when the pattern
    does not exist or Newton leaves the class.
    """
    grid = grid or minimal_cell()
    coc = co.with_c1(c1)
    root = select_branch_root(klass, coc)
    if root is None:
        return None
    cont = Continuation(SwiftHohenberg(coc), grid, settings or ContinuationSettings())
    seed = am.ansatz_field(root, coc, grid)
    try:
        point = cont.newton_correct(seed, c1, with_eigs=False)
    except (ConvergenceError, SingularSolveError):
        return None
    a, b = mode_amplitudes(point.state.values[0], grid)
    are, bre = a / (2 * co.eps), b / (2 * co.eps)
    if not _class_matches(klass, are, bre):
        logger.debug("pattern %s at c1=%.4f left its class: a=%.4f b=%.4f",
                     klass.value, c1, are, bre)
        return None
    return point


# ---------------------------------------------------------------------------
# energy curves
# ---------------------------------------------------------------------------

@dataclass
class EnergyCurve:
    """Per-class energy samples over a c1 grid; NaN marks missing patterns."""

    c1_axis: np.ndarray
    values: dict[EquilibriumClass, np.ndarray]
    quantity: str

    def to_csv(self, path) -> None:
        tag = "Ep" if self.quantity == "Ep" else "H"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["c1"] + [f"{tag}_{_CLASS_COLUMNS[k]}" for k in PATTERN_CLASSES])
            for i, c1 in enumerate(self.c1_axis):
                row = [f"{c1:.17g}"]
                for k in PATTERN_CLASSES:
                    v = self.values[k][i]
                    row.append("" if np.isnan(v) else f"{v:.17g}")
                writer.writerow(row)


def _ep_of_class(klass: EquilibriumClass, co: Coefficients) -> float:
    root = select_branch_root(klass, co)
    if root is None:
        return float("nan")
    _, ep, _ = am.gl_energies(root, (0.0, 0.0, 0.0), co)
    return ep


def _hamiltonian_of_class(
    klass: EquilibriumClass, co: Coefficients, c1: float, grid: Grid, scaled: bool
) -> float:
    point = pattern_state(klass, co, c1, grid)
    if point is None:
        return float("nan")
    return hamiltonian_value(point.state, co.with_c1(c1), grid, scaled=scaled)


def energy_curves(
    quantity: str,
    co: Coefficients,
    c1_values,
    grid: Grid | None = None,
    scaled: bool = True,
) -> EnergyCurve:
    """Energy of each pure pattern class along a c1 range.

    ``quantity`` is ``"Ep"`` (potential energy of the spatially constant
    amplitude equilibria, kinetic part zero) or ``"Hamiltonian"`` (median
    spatial Hamiltonian of on-demand converged cell states).
    """
    if quantity not in ("Ep", "Hamiltonian"):
        raise ValueError(f"unknown quantity {quantity!r}")
    c1_values = np.asarray(c1_values, dtype=float)
    grid = grid or minimal_cell()
    values = {k: np.full(c1_values.size, np.nan) for k in PATTERN_CLASSES}
    for i, c1 in enumerate(c1_values):
        coc = co.with_c1(float(c1))
        for k in PATTERN_CLASSES:
            if quantity == "Ep":
                values[k][i] = _ep_of_class(k, coc)
            else:
                values[k][i] = _hamiltonian_of_class(k, co, float(c1), grid, scaled)
    return EnergyCurve(c1_axis=c1_values, values=values, quantity=quantity)


# ---------------------------------------------------------------------------
# Maxwell points
# ---------------------------------------------------------------------------

def maxwell_point(
    pair: tuple[EquilibriumClass, EquilibriumClass],
    quantity: str,
    co: Coefficients,
    bracket: tuple[float, float],
    grid: Grid | None = None,
    scaled: bool = True,
    xtol: float = 1e-4,
) -> float:
    """Parameter value where two pattern classes have equal energy.

    Bisects the energy difference over ``bracket`` to ``xtol`` in c1.
    Raises :class:`BracketError` when the difference does not change sign,
    e.g. for the symmetry-degenerate up/down pair at ``c2 = c4 = 0``.
    """
    ka, kb = pair
    grid = grid or minimal_cell()

    def diff(c1: float) -> float:
        coc = co.with_c1(c1)
        if quantity == "Ep":
            da = _ep_of_class(ka, coc)
            db = _ep_of_class(kb, coc)
        elif quantity == "Hamiltonian":
            da = _hamiltonian_of_class(ka, co, c1, grid, scaled)
            db = _hamiltonian_of_class(kb, co, c1, grid, scaled)
        else:
            raise ValueError(f"unknown quantity {quantity!r}")
        if math.isnan(da) or math.isnan(db):
            raise BracketError(
                f"pattern missing at c1={c1:.5g} for pair "
                f"({ka.value}, {kb.value})")
        return da - db

    lo, hi = float(bracket[0]), float(bracket[1])
    flo, fhi = diff(lo), diff(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise BracketError(
            f"energy difference has equal signs at bracket ends: "
            f"d({lo}) = {flo:.4e}, d({hi}) = {fhi:.4e}")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        fm = diff(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)
