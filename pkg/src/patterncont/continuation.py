"""Newton correction and pseudo-arclength continuation of steady states.

The driver follows branches of the systems defined in
:mod:`patterncont.pde_systems` through folds, records an eigenvalue
summary per converged point, localizes folds and branch points by
bisection in arclength, switches onto bifurcating branches along critical
eigenvectors, and provides the branch measures and the interface-position
diagnostic used by the snaking analysis.

Arclength metric: ``ds^2 = theta * ||du||_2^2 / |Omega| + (1 - theta) *
dlambda^2`` with the area-normalized L2 norm, so state increments and
parameter increments are balanced on snaking branches where the parameter
barely moves.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field as dataclass_field, asdict
from pathlib import Path

import numpy as np
import scipy.linalg as sla
import scipy.sparse.linalg as spla

from .amplitude import NEUTRAL_TOL
from .errors import (
    ConvergenceError,
    InterfaceError,
    SingularSolveError,
    SwitchError,
)
from .pde_systems import Field, Grid

logger = logging.getLogger(__name__)

#: dense eigensolves below this size; shift-inverted ARPACK above
_DENSE_EIG_MAX = 900


@dataclass(frozen=True)
class ContinuationSettings:
    """Step control and tolerances for one continuation run."""

    ds0: float = 0.01
    ds_min: float = 1e-5
    ds_max: float = 0.1
    theta: float = 0.5
    newton_tol: float = 1e-8
    newton_max_iter: int = 20
    n_eigs: int = 20
    max_steps: int = 400
    param_min: float = -np.inf
    param_max: float = np.inf
    neutral_tol: float = NEUTRAL_TOL
    event_param_tol: float = 1e-6

    def __post_init__(self) -> None:
        if not (0 < self.ds_min <= self.ds0 <= self.ds_max):
            raise ValueError("require 0 < ds_min <= ds0 <= ds_max")
        if not (0 < self.theta < 1):
            raise ValueError("theta must lie strictly between 0 and 1")


@dataclass
class BranchPoint:
    """One converged continuation point with measures and eigen summary."""

    param: float
    state: Field
    norm: float
    u_max: float
    u_min: float
    n_unstable: int
    eigenvalues: np.ndarray
    residual_norm: float
    tags: set[str] = dataclass_field(default_factory=set)
    n_iterations: int = 0

    def tag_string(self) -> str:
        return ";".join(sorted(self.tags))


@dataclass
class Branch:
    """Ordered branch points plus provenance metadata."""

    points: list[BranchPoint]
    meta: dict

    def __len__(self) -> int:
        return len(self.points)

    def params(self) -> np.ndarray:
        return np.array([p.param for p in self.points])

    def norms(self) -> np.ndarray:
        return np.array([p.norm for p in self.points])

    def tagged(self, tag: str) -> list[int]:
        return [i for i, p in enumerate(self.points) if tag in p.tags]

    def segment(self, start: int, stop: int | None = None) -> "Branch":
        """Sub-branch view (shared points) for windowed event detection."""
        meta = dict(self.meta)
        meta["segment_of"] = (start, stop)
        return Branch(points=self.points[start:stop], meta=meta)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["index", "param", "norm", "u_max", "u_min", "n_unstable", "tag"])
            for i, p in enumerate(self.points):
                writer.writerow(
                    [i, f"{p.param:.17g}", f"{p.norm:.17g}", f"{p.u_max:.17g}",
                     f"{p.u_min:.17g}", p.n_unstable, p.tag_string()]
                )

    def save_fields(self, directory, grid: Grid, system_name: str, stride: int = 0) -> list[str]:
        """Write companion field files at ``stride`` plus at every event."""
        from .pde_systems import save_field

        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        written = []
        for i, p in enumerate(self.points):
            event = bool(p.tags)
            if not event and (stride <= 0 or i % stride != 0):
                continue
            name = f"point_{i:05d}.field"
            save_field(directory / name, p.state, grid, system_name)
            written.append(str(directory / name))
        return written


# ---------------------------------------------------------------------------
# measures and diagnostics
# ---------------------------------------------------------------------------

def measures(u: Field, grid: Grid) -> tuple[float, float, float]:
    """Area-normalized L2 norm and extrema (component 0 for 2-component)."""
    sq = np.sum(u.values ** 2, axis=0)
    norm = math.sqrt(float(np.mean(sq)))
    return norm, float(u.values[0].max()), float(u.values[0].min())


def mode_amplitudes(values: np.ndarray, grid: Grid, kc: float = 1.0) -> tuple[float, float]:
    """Lattice-mode content of samples: stripe and oblique-pair amplitudes.

    Returns ``(a, b)`` such that ``u ~ a cos(kc x) + 2 b cos(kc x / 2)
    cos(sqrt(3) kc y / 2) + harmonics``, i.e. ``a`` and ``b`` play the
    roles of ``2 eps A1`` and ``2 eps A2`` (= ``2 eps A3``) of the lattice
    ansatz.  Uses exact projections on commensurate domains, where the two
    basis shapes have mean squares 1/2 and 1/4.
    """
    x = grid.x[:, None]
    y = grid.y[None, :]
    phi1 = np.cos(kc * x) * np.ones_like(y)
    phi2 = np.cos(0.5 * kc * x) * np.cos(0.5 * math.sqrt(3.0) * kc * y)
    a = 2.0 * float(np.mean(values * phi1))
    b = 2.0 * float(np.mean(values * phi2))
    return a, b


def interface_position(u: Field, templates: tuple[Field, Field], grid: Grid) -> float:
    """Front position between regions resembling the two templates.

    For every x-column the state is correlated with the up-hexagon
    template over a window of width ``2 pi`` (y-averaged): the score is
    the least-squares weight of ``u - H-`` on ``H+ - H-``, which is 1 in a
    pure up-hexagon region and 0 in a pure down-hexagon region.  The
    reported position is the median crossing of 1/2.  Pure up-hexagon
    input returns ``+lx``, pure down-hexagon ``-lx`` by convention.
    """
    hp, hm = templates
    du = u.values[0] - hm.values[0]
    dt = hp.values[0] - hm.values[0]
    num = (du * dt).sum(axis=1)
    den = (dt * dt).sum(axis=1)

    half = max(1, int(round(math.pi / (2 * grid.lx / grid.nx))))
    kern = np.ones(2 * half + 1)
    wnum = np.convolve(num, kern, mode="same")
    wden = np.convolve(den, kern, mode="same")
    if np.min(wden) <= 0:
        raise InterfaceError("template difference vanishes inside a window")
    score = wnum / wden

    if score.min() > 0.5:
        return grid.lx
    if score.max() < 0.5:
        return -grid.lx

    shifted = score - 0.5
    crossings = []
    for i in range(len(shifted) - 1):
        if shifted[i] == 0.0:
            crossings.append(grid.x[i])
        elif shifted[i] * shifted[i + 1] < 0:
            frac = shifted[i] / (shifted[i] - shifted[i + 1])
            crossings.append(grid.x[i] + frac * (grid.x[i + 1] - grid.x[i]))
    if not crossings:
        raise InterfaceError("correlation profile is mixed with no 1/2 crossing")
    return float(np.median(crossings))


# ---------------------------------------------------------------------------
# eigenvalue extraction
# ---------------------------------------------------------------------------

def _leading_eigenvalues(
    jac: np.ndarray, k: int, symmetric: bool
) -> np.ndarray:
    """Eigenvalues nearest zero, augmented with the rightmost few.

    Below ``_DENSE_EIG_MAX`` the full dense spectrum is used (exact and
    deterministic).  Larger problems use shift-inverted ARPACK around 0
    plus a direct Lanczos/Arnoldi run for the rightmost eigenvalues so
    instability counts cannot miss positive eigenvalues outside the
    near-zero window.
    """
    n = jac.shape[0]
    if n <= _DENSE_EIG_MAX or k >= n - 2:
        eig = sla.eigvalsh(jac) if symmetric else sla.eigvals(jac)
        eig = np.asarray(eig, dtype=complex)
        order = np.argsort(np.abs(eig))[: min(k, n)]
        sel = eig[order]
        rightmost = eig[np.argsort(-eig.real)[: min(6, n)]]
        merged = np.concatenate([sel, rightmost])
    else:
        # spectra here are bounded above by O(1) and extend far down the
        # negative axis, so a shift above the rightmost cluster gives the
        # shift-inverted Arnoldi excellent separation
        sigma_right = 1.0
        v0 = np.full(n, 1.0 / math.sqrt(n))
        mat_op = spla.LinearOperator((n, n), matvec=lambda v: jac @ v)

        def shift_inv(sigma: float, kk: int) -> np.ndarray:
            shifted = jac.copy()
            shifted.ravel()[:: n + 1] -= sigma
            lu = sla.lu_factor(shifted)
            op_inv = spla.LinearOperator((n, n), matvec=lambda v: sla.lu_solve(lu, v))
            fn = spla.eigsh if symmetric else spla.eigs
            return fn(mat_op, k=kk, sigma=sigma, OPinv=op_inv, v0=v0,
                      return_eigenvectors=False)

        try:
            near = shift_inv(0.0, k)
            right = shift_inv(sigma_right, 4)
        except spla.ArpackError as exc:  # pragma: no cover - rare ARPACK stall
            logger.warning("ARPACK failed (%s); falling back to dense spectrum", exc)
            eig = sla.eigvalsh(jac) if symmetric else sla.eigvals(jac)
            eig = np.asarray(eig, dtype=complex)
            near = eig[np.argsort(np.abs(eig))[:k]]
            right = eig[np.argsort(-eig.real)[:6]]
        merged = np.concatenate([np.asarray(near, dtype=complex),
                                 np.asarray(right, dtype=complex)])

    # dedupe pairs that appear in both windows
    keep: list[complex] = []
    for lam in merged:
        if not any(abs(lam - mu) <= 1e-9 * (1 + abs(mu)) for mu in keep):
            keep.append(complex(lam))
    out = np.array(sorted(keep, key=lambda z: -z.real))
    return out


def eigenpairs_near_zero(
    jac: np.ndarray, symmetric: bool, k: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    """The ``k`` eigenpairs closest to zero, ordered by |eigenvalue|."""
    n = jac.shape[0]
    if n <= _DENSE_EIG_MAX:
        if symmetric:
            w, v = sla.eigh(jac)
        else:
            w, v = sla.eig(jac)
        order = np.argsort(np.abs(w))[:k]
        return np.real(w[order]), np.real(v[:, order])
    lu = sla.lu_factor(jac)
    op_inv = spla.LinearOperator((n, n), matvec=lambda rhs: sla.lu_solve(lu, rhs))
    mat_op = spla.LinearOperator((n, n), matvec=lambda rhs: jac @ rhs)
    v0 = np.full(n, 1.0 / math.sqrt(n))
    if symmetric:
        w, v = spla.eigsh(mat_op, k=k, sigma=0, OPinv=op_inv, v0=v0)
    else:
        w, v = spla.eigs(mat_op, k=k, sigma=0, OPinv=op_inv, v0=v0)
    order = np.argsort(np.abs(w))[:k]
    return np.real(w[order]), np.real(v[:, order])


def _eigenvector_nearest_zero(jac: np.ndarray, symmetric: bool) -> tuple[float, np.ndarray]:
    w, v = eigenpairs_near_zero(jac, symmetric, 1)
    return float(w[0]), v[:, 0]


# ---------------------------------------------------------------------------
# the continuation driver
# ---------------------------------------------------------------------------

class Continuation:
    """Continuation driver binding a steady system to a grid and settings."""

    def __init__(self, system, grid: Grid, settings: ContinuationSettings | None = None):
        self.system = system
        self.grid = grid
        self.settings = settings or ContinuationSettings()
        self._ncomp = system.n_components
        self._nscalar = self._ncomp * grid.nx * grid.ny

    # -- small helpers ---------------------------------------------------
    def _mean_dot(self, a: np.ndarray, b: np.ndarray) -> float:
        return float(a @ b) / self._nscalar

    def _metric_norm(self, du: np.ndarray, dlam: float) -> float:
        th = self.settings.theta
        return math.sqrt(th * self._mean_dot(du, du) + (1 - th) * dlam * dlam)

    def _field(self, vec: np.ndarray) -> Field:
        return Field.from_flat(vec, self.grid, self._ncomp)

    def _residual(self, u: np.ndarray, lam: float) -> np.ndarray:
        return self.system.residual_flat(u, lam, self.grid)

    def _jacobian(self, u: np.ndarray, lam: float) -> np.ndarray:
        return self.system.jacobian_flat(u, lam, self.grid)

    def _dparam(self, u: np.ndarray, lam: float) -> np.ndarray:
        return self.system.residual_dparam(u, lam, self.grid)

    def _make_point(
        self, u: np.ndarray, lam: float, res_norm: float, n_iter: int,
        with_eigs: bool = True,
    ) -> BranchPoint:
        fld = self._field(u)
        norm, umax, umin = measures(fld, self.grid)
        if with_eigs:
            jac = self._jacobian(u, lam)
            eig = _leading_eigenvalues(jac, self.settings.n_eigs, self.system.symmetric)
            n_unstable = int(np.sum(eig.real > self.settings.neutral_tol))
        else:
            eig = np.zeros(0, dtype=complex)
            n_unstable = -1
        return BranchPoint(
            param=float(lam), state=fld, norm=norm, u_max=umax, u_min=umin,
            n_unstable=n_unstable, eigenvalues=eig, residual_norm=res_norm,
            n_iterations=n_iter,
        )

    # -- Newton at fixed parameter ----------------------------------------
    def newton_correct(self, seed: Field | np.ndarray, param: float,
                       with_eigs: bool = True) -> BranchPoint:
        """Newton-correct a seed at fixed parameter until max-norm residual
        drops below ``newton_tol``; raises :class:`ConvergenceError` on
        stagnation and :class:`SingularSolveError` on unusable solves."""
        st = self.settings
        u = seed.flat().copy() if isinstance(seed, Field) else np.asarray(seed, dtype=float).copy()
        if not np.isfinite(u).all():
            raise ValueError("seed contains non-finite entries")
        res = self._residual(u, param)
        rnorm = float(np.abs(res).max())
        for it in range(st.newton_max_iter):
            if rnorm < st.newton_tol:
                return self._make_point(u, param, rnorm, it, with_eigs)
            jac = self._jacobian(u, param)
            try:
                du = sla.lu_solve(sla.lu_factor(jac), res)
            except (sla.LinAlgError, ValueError) as exc:
                raise SingularSolveError(f"linear solve failed at param={param}: {exc}")
            if not np.isfinite(du).all():
                raise SingularSolveError(f"singular Jacobian at param={param}")
            # damped step: halve until the residual stops growing
            step, best = 1.0, None
            for _ in range(6):
                res_new = self._residual(u - step * du, param)
                rn = float(np.abs(res_new).max())
                if np.isfinite(rn) and (best is None or rn < best[0]):
                    best = (rn, step, res_new)
                if np.isfinite(rn) and (rn < rnorm or rn < st.newton_tol):
                    break
                step *= 0.5
            rn, step, res_new = best
            if not np.isfinite(rn) or rn >= rnorm:
                raise ConvergenceError(
                    f"Newton stagnated at param={param}: residual {rnorm:.3e}",
                    residual_norm=rnorm)
            u = u - step * du
            res, rnorm = res_new, rn
        if rnorm < st.newton_tol:
            return self._make_point(u, param, rnorm, st.newton_max_iter, with_eigs)
        raise ConvergenceError(
            f"Newton stalled at param={param}: residual {rnorm:.3e} "
            f"after {st.newton_max_iter} iterations", residual_norm=rnorm)

    # -- one arclength corrector solve ------------------------------------
    def _corrector(
        self, u_pred: np.ndarray, lam_pred: float,
        u0: np.ndarray, lam0: float,
        t_u: np.ndarray, t_lam: float, ds: float,
    ) -> tuple[np.ndarray, float, float, int]:
        """Newton on the extended system with the arclength hyperplane
        constraint; returns (u, lam, residual_norm, iterations)."""
        st = self.settings
        th = st.theta
        u, lam = u_pred.copy(), float(lam_pred)
        for it in range(st.newton_max_iter):
            res = self._residual(u, lam)
            rnorm = float(np.abs(res).max())
            gap = th * self._mean_dot(t_u, u - u0) + (1 - th) * t_lam * (lam - lam0) - ds
            if rnorm < st.newton_tol and abs(gap) < st.newton_tol * max(1.0, abs(ds)):
                return u, lam, rnorm, it
            jac = self._jacobian(u, lam)
            flam = self._dparam(u, lam)
            try:
                lu = sla.lu_factor(jac)
                z1 = sla.lu_solve(lu, res)
                z2 = sla.lu_solve(lu, flam)
            except (sla.LinAlgError, ValueError):
                z1 = z2 = None
            if z1 is None or not (np.isfinite(z1).all() and np.isfinite(z2).all()):
                # bordered fallback: solve the (N+1)-dimensional system directly
                n = u.size
                big = np.empty((n + 1, n + 1))
                big[:n, :n] = jac
                big[:n, n] = flam
                big[n, :n] = th * t_u / self._nscalar
                big[n, n] = (1 - th) * t_lam
                rhs = np.concatenate([res, [gap]])
                try:
                    sol = sla.solve(big, -rhs)
                except sla.LinAlgError as exc:
                    raise SingularSolveError(f"bordered solve failed: {exc}")
                du, dlam = sol[:n], sol[n]
            else:
                denom = (1 - th) * t_lam - th * self._mean_dot(t_u, z2)
                if denom == 0.0:
                    raise SingularSolveError("degenerate arclength constraint")
                dlam = (th * self._mean_dot(t_u, z1) - gap) / denom
                du = -(z1 + dlam * z2)
            u = u + du
            lam = lam + dlam
            if not (np.isfinite(u).all() and math.isfinite(lam)):
                raise ConvergenceError("corrector produced non-finite iterate",
                                       residual_norm=float("inf"))
        raise ConvergenceError(
            f"corrector stalled near param={lam}: residual {rnorm:.3e}",
            residual_norm=rnorm)

    def _initial_tangent(self, u: np.ndarray, lam: float, direction: int) -> tuple[np.ndarray, float]:
        jac = self._jacobian(u, lam)
        flam = self._dparam(u, lam)
        try:
            du = -sla.lu_solve(sla.lu_factor(jac), flam)
        except (sla.LinAlgError, ValueError) as exc:
            raise SingularSolveError(f"initial tangent solve failed: {exc}")
        nrm = self._metric_norm(du, 1.0)
        t_u, t_lam = du / nrm, 1.0 / nrm
        if direction < 0:
            t_u, t_lam = -t_u, -t_lam
        return t_u, t_lam

    # -- branch continuation ----------------------------------------------
    def continue_branch(self, start: BranchPoint, direction: int = 1) -> Branch:
        """Pseudo-arclength continuation with secant predictor.

        Steps halve on corrector failure and grow by 1.3 after fast
        convergence, clamped to ``[ds_min, ds_max]``.  The run stops at
        ``max_steps``, when the parameter leaves ``[param_min, param_max]``,
        or when the branch closes on its own start; on step-size exhaustion
        a partial branch is returned with its last point tagged ``end``.
        """
        st = self.settings
        u0 = start.state.flat().copy()
        lam0 = start.param
        res0 = float(np.abs(self._residual(u0, lam0)).max())
        if res0 > 10 * st.newton_tol:
            raise ValueError(f"start point not converged: residual {res0:.3e}")

        points = [start]
        start.tags.add("start")
        t_u, t_lam = self._initial_tangent(u0, lam0, direction)
        ds = st.ds0
        meta = {
            "system": self.system.name,
            "param": self.system.param_name,
            "direction": direction,
            "settings": asdict(self.settings),
            "grid": {"lx": self.grid.lx, "ly": self.grid.ly,
                     "nx": self.grid.nx, "ny": self.grid.ny},
        }

        th = st.theta
        for step in range(st.max_steps):
            accepted = None
            while True:
                u_pred = u0 + ds * t_u
                lam_pred = lam0 + ds * t_lam
                try:
                    u1, lam1, rnorm, iters = self._corrector(
                        u_pred, lam_pred, u0, lam0, t_u, t_lam, ds)
                except (ConvergenceError, SingularSolveError):
                    if ds <= st.ds_min:
                        break
                    ds = max(st.ds_min, 0.5 * ds)
                    continue
                # reject steps whose secant turns back along the branch (the
                # corrector landed on the already traversed side of a sharp
                # fold) and steps that travel far orthogonally to the
                # constraint plane (it hopped onto a nearby parallel sheet,
                # e.g. the adjacent rung of a snaking branch)
                du = u1 - u0
                dlam = lam1 - lam0
                seg = self._metric_norm(du, dlam)
                turn = (th * self._mean_dot(t_u, du) + (1 - th) * t_lam * dlam) / seg
                if (turn < 0.0 or seg > 3.0 * ds) and ds > st.ds_min:
                    ds = max(st.ds_min, 0.5 * ds)
                    continue
                accepted = (u1, lam1, rnorm, iters)
                break
            if accepted is None:
                if step == 0:
                    raise ConvergenceError(
                        f"continuation failed immediately at ds_min={st.ds_min}")
                points[-1].tags.add("end")
                logger.info("continuation stalled after %d steps", step)
                break

            u1, lam1, rnorm, iters = accepted
            point = self._make_point(u1, lam1, rnorm, iters)
            points.append(point)

            du = u1 - u0
            dlam = lam1 - lam0
            seg = self._metric_norm(du, dlam)
            t_u, t_lam = du / seg, dlam / seg
            u0, lam0 = u1, lam1
            if iters <= 3:
                ds = min(st.ds_max, 1.3 * ds)

            if not (st.param_min <= lam1 <= st.param_max):
                point.tags.add("end")
                logger.info("parameter window exit at %s=%.6g", self.system.param_name, lam1)
                break
            if step > 10 and abs(lam1 - points[0].param) < 1e-6 \
                    and abs(point.norm - points[0].norm) < 1e-6:
                point.tags.add("end")
                logger.info("closed loop detected after %d steps", step + 1)
                break
        else:
            points[-1].tags.add("end")

        logger.info("branch finished: %d points, %s in [%.5g, %.5g]",
                    len(points), self.system.param_name,
                    min(p.param for p in points), max(p.param for p in points))
        return Branch(points=points, meta=meta)

    # -- event localization -------------------------------------------------
    def _point_between(self, pa: BranchPoint, pb: BranchPoint, frac: float,
                       with_eigs: bool = False) -> BranchPoint:
        ua, ub = pa.state.flat(), pb.state.flat()
        du = ub - ua
        dlam = pb.param - pa.param
        seg = self._metric_norm(du, dlam)
        t_u, t_lam = du / seg, dlam / seg
        u_pred = ua + frac * du
        lam_pred = pa.param + frac * dlam
        u, lam, rnorm, iters = self._corrector(
            u_pred, lam_pred, ua, pa.param, t_u, t_lam, frac * seg)
        return self._make_point(u, lam, rnorm, iters, with_eigs=with_eigs)

    def _localize_fold(self, pa: BranchPoint, pm: BranchPoint, pb: BranchPoint) -> BranchPoint:
        """Golden-section search for the parameter extremum between pa, pb."""
        sign = 1.0 if pm.param >= max(pa.param, pb.param) else -1.0
        cache: dict[float, BranchPoint] = {}

        def value(frac: float) -> float:
            if frac not in cache:
                cache[frac] = self._point_between(pa, pb, frac)
            return sign * cache[frac].param

        # golden search narrows the bracket; a final parabola fit through the
        # best triple pins the quadratic extremum well below event_param_tol
        invphi = (math.sqrt(5.0) - 1) / 2
        a, b = 0.0, 1.0
        x1 = b - invphi * (b - a)
        x2 = a + invphi * (b - a)
        f1, f2 = value(x1), value(x2)
        for _ in range(25):
            if b - a < 1e-3:
                break
            if f1 < f2:
                a, x1, f1 = x1, x2, f2
                x2 = a + invphi * (b - a)
                f2 = value(x2)
            else:
                b, x2, f2 = x2, x1, f1
                x1 = b - invphi * (b - a)
                f1 = value(x1)
        xs = sorted(cache)
        fracs = np.array(xs)
        vals = np.array([sign * cache[x].param for x in xs])
        i = int(np.argmax(vals))
        frac_star = fracs[i]
        if 0 < i < len(fracs) - 1:
            coef = np.polyfit(fracs[i - 1: i + 2], vals[i - 1: i + 2], 2)
            if coef[0] < 0:
                vertex = -coef[1] / (2 * coef[0])
                if fracs[i - 1] <= vertex <= fracs[i + 1]:
                    frac_star = float(vertex)
        point = self._point_between(pa, pb, frac_star, with_eigs=True)
        point.tags.add("fold")
        return point

    def _localize_branch_point(self, pa: BranchPoint, pb: BranchPoint) -> BranchPoint:
        """Bisection on the instability count between two branch points."""
        na = pa.n_unstable
        lo, hi = 0.0, 1.0
        plo, phi = pa, pb
        for _ in range(60):
            if abs(phi.param - plo.param) < self.settings.event_param_tol:
                break
            mid = 0.5 * (lo + hi)
            pm = self._point_between(pa, pb, mid, with_eigs=True)
            if pm.n_unstable == na:
                lo, plo = mid, pm
            else:
                hi, phi = mid, pm
        point = self._point_between(pa, pb, 0.5 * (lo + hi), with_eigs=True)
        point.tags.add("branch-point")
        return point

    def detect_events(self, branch: Branch, kinds: tuple[str, ...] = ("fold", "branch-point")) -> Branch:
        """Tag folds and branch points, inserting bisection-localized points.

        Folds are parameter-direction reversals; branch points are
        instability-count changes away from folds.  Each event is located
        to ``event_param_tol`` in the parameter.  ``kinds`` restricts the
        event types searched for.
        """
        pts = list(branch.points)
        if len(pts) < 3:
            return Branch(points=pts, meta=dict(branch.meta))

        lam = np.array([p.param for p in pts])
        dl = np.diff(lam)
        out: list[BranchPoint] = [pts[0]]
        fold_segments: set[int] = set()
        if "fold" in kinds:
            for i in range(1, len(pts) - 1):
                if dl[i - 1] * dl[i] < 0:
                    fold_segments.add(i)
        for i in range(1, len(pts)):
            if i in fold_segments:
                try:
                    fold = self._localize_fold(pts[i - 1], pts[i], pts[i + 1])
                    out.append(fold)
                except (ConvergenceError, SingularSolveError) as exc:
                    logger.warning("fold localization failed near index %d: %s", i, exc)
                    pts[i].tags.add("fold")
            out.append(pts[i])

        if "branch-point" not in kinds:
            return Branch(points=out, meta=dict(branch.meta))

        final: list[BranchPoint] = [out[0]]
        for prev, cur in zip(out[:-1], out[1:]):
            near_fold = "fold" in prev.tags or "fold" in cur.tags
            # a segment may hide several crossings; localize them in turn
            left = prev
            for _ in range(4):
                if (near_fold or left.n_unstable < 0 or cur.n_unstable < 0
                        or left.n_unstable == cur.n_unstable):
                    break
                if abs(cur.param - left.param) < self.settings.event_param_tol:
                    cur.tags.add("branch-point")
                    break
                try:
                    bp = self._localize_branch_point(left, cur)
                except (ConvergenceError, SingularSolveError) as exc:
                    logger.warning("branch-point localization failed: %s", exc)
                    cur.tags.add("branch-point")
                    break
                if abs(bp.param - left.param) < self.settings.event_param_tol \
                        and bp.n_unstable == left.n_unstable:
                    break
                final.append(bp)
                left = bp
            final.append(cur)
        return Branch(points=final, meta=dict(branch.meta))

    # -- branch switching ----------------------------------------------------
    def branch_switch(
        self, branch: Branch, event_index: int,
        direction_vector: np.ndarray | None = None,
    ) -> BranchPoint:
        """Seed and converge onto the branch crossing at a branch point.

        The seed is the critical state plus ``delta`` times the critical
        eigenvector (max-norm 1); both signs are attempted and corrected by
        Newton at fixed parameter slightly on the far side of the event,
        keeping the first result that stays away from the parent branch.
        ``direction_vector`` overrides the computed eigenvector (useful at
        degenerate bifurcations with multi-dimensional kernels).
        """
        point = branch.points[event_index]
        if "branch-point" not in point.tags:
            raise ValueError(f"point {event_index} carries no branch-point tag")
        u_star = point.state.flat()
        lam_star = point.param

        if direction_vector is None:
            jac = self._jacobian(u_star, lam_star)
            _, vec = _eigenvector_nearest_zero(jac, self.system.symmetric)
        else:
            vec = np.asarray(direction_vector, dtype=float).ravel()
        vec = vec / np.abs(vec).max()

        norm_star = point.norm
        delta = 0.01 * max(1.0, norm_star)

        # far side: where the parent branch is less stable
        neighbors = [branch.points[i] for i in (event_index - 1, event_index + 1)
                     if 0 <= i < len(branch.points)]
        offset = 0.0
        if len(neighbors) == 2 and neighbors[0].n_unstable != neighbors[1].n_unstable:
            worse = max(neighbors, key=lambda p: p.n_unstable)
            offset = 0.25 * (worse.param - lam_star)

        for lam_try in (lam_star + offset, lam_star, lam_star - offset):
            try:
                parent = self.newton_correct(u_star, lam_try, with_eigs=False)
            except (ConvergenceError, SingularSolveError):
                continue
            for sgn in (+1.0, -1.0):
                seed = u_star + sgn * delta * vec
                try:
                    cand = self.newton_correct(seed, lam_try)
                except (ConvergenceError, SingularSolveError):
                    continue
                dist = cand.state.flat() - parent.state.flat()
                dist_norm = math.sqrt(self._mean_dot(dist, dist))
                if dist_norm > 10 * self.settings.newton_tol:
                    cand.tags.add("start")
                    logger.info("branch switch at %s=%.6g: distance %.3e from parent",
                                self.system.param_name, lam_try, dist_norm)
                    return cand
            if offset == 0.0:
                break
        raise SwitchError(
            f"switching at {self.system.param_name}={lam_star:.6g} fell back "
            "onto the parent branch for both perturbation signs")
