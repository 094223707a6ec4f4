"""End-to-end analysis pipelines built from the toolkit modules.

These drive the multi-stage studies behind the CLI modes and the
verification suite: the stripe-bean-snake cascade on the long Neumann
domain, the amplitude-versus-PDE branch comparison on a minimal cell, the
near-degenerate stripe fold at ``eps = 1``, and the vegetation
tristability scan.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import amplitude as am
from .amplitude import AmplitudeVector, Coefficients, EquilibriumClass
from .conserved import select_branch_root
from .continuation import (
    Branch,
    BranchPoint,
    Continuation,
    ContinuationSettings,
    eigenpairs_near_zero,
    interface_position,
    mode_amplitudes,
)
from .errors import ConvergenceError, SingularSolveError, SwitchError
from .pde_systems import (
    Field,
    Grid,
    SwiftHohenberg,
    TuringPoint,
    VegParams,
    Vegetation,
    hex_lattice_profile,
    turing_locus,
    veg_homogeneous,
)

logger = logging.getLogger(__name__)

PATTERNS = (EquilibriumClass.UPHEX, EquilibriumClass.STRIPE, EquilibriumClass.DOWNHEX)


def fig3_grid(nx: int = 128, ny: int = 12) -> Grid:
    """The long snaking domain: 16 pi by 2 pi / sqrt(3)."""
    return Grid(lx=16 * math.pi, ly=2 * math.pi / math.sqrt(3.0), nx=nx, ny=ny)


def stable_c1_interval(
    klass: EquilibriumClass, co: Coefficients, window=(-0.5, 1.0), samples: int = 301
) -> tuple[float, float] | None:
    """Largest c1 interval where the class has a stable amplitude root."""
    c1s = np.linspace(window[0], window[1], samples)
    flags = np.zeros(samples, dtype=bool)
    for i, c1 in enumerate(c1s):
        coc = co.with_c1(float(c1))
        for e in am.scalar_equilibria(klass, coc, 5):
            if am.classify_stability(e, coc, 5).stable:
                flags[i] = True
                break
    best = None
    i = 0
    while i < samples:
        if flags[i]:
            j = i
            while j + 1 < samples and flags[j + 1]:
                j += 1
            if best is None or c1s[j] - c1s[i] > best[1] - best[0]:
                best = (float(c1s[i]), float(c1s[j]))
            i = j + 1
        else:
            i += 1
    return best


def _probe_direction(cont: Continuation, seed: BranchPoint, score) -> int:
    """Pick the continuation direction maximizing ``score`` after a nudge."""
    best = (None, +1)
    for direction in (+1, -1):
        probe = ContinuationSettings(
            ds0=cont.settings.ds0, ds_min=cont.settings.ds_min,
            ds_max=cont.settings.ds0, max_steps=3,
            param_min=-np.inf, param_max=np.inf,
            n_eigs=min(cont.settings.n_eigs, 8))
    # run 3 tiny steps each way on a throwaway driver
        try:
            br = Continuation(cont.system, cont.grid, probe).continue_branch(
                BranchPoint(seed.param, seed.state, seed.norm, seed.u_max,
                            seed.u_min, seed.n_unstable, seed.eigenvalues,
                            seed.residual_norm, set()), direction)
        except (ConvergenceError, SingularSolveError):
            continue
        val = score(br)
        if best[0] is None or val > best[0]:
            best = (val, direction)
    return best[1]


# ---------------------------------------------------------------------------
# snaking cascade (long domain)
# ---------------------------------------------------------------------------

@dataclass
class SnakeScenario:
    """All branches and diagnostics of the stripe-bean-snake cascade."""

    grid: Grid
    stripe: Branch
    stripe_bp_param: float
    bean: Branch
    bean_bp_param: float
    bean_end_hex_distance: float
    snake: Branch
    fold_indices: list[int]
    fold_params: list[float]
    fold_positions: list[float]
    templates: tuple[Field, Field]
    template_param: float

    def alternating_folds(self) -> bool:
        if len(self.fold_params) < 2:
            return False
        mid = 0.5 * (max(self.fold_params) + min(self.fold_params))
        sides = [1 if p > mid else -1 for p in self.fold_params]
        return all(a != b for a, b in zip(sides[:-1], sides[1:]))

    def same_side_shifts(self) -> list[float]:
        """Interface shifts between each fold and the fold after next."""
        return [abs(self.fold_positions[i + 2] - self.fold_positions[i])
                for i in range(len(self.fold_positions) - 2)]


def _modulation_ratio(values: np.ndarray, grid: Grid) -> float:
    """Nonuniformity of the oblique-mode envelope along x (0 = uniform)."""
    phi2 = (np.cos(0.5 * grid.x)[:, None]
            * np.cos(0.5 * math.sqrt(3.0) * grid.y)[None, :])
    per_column = (values * phi2).mean(axis=1)
    win = max(1, int(round(2 * math.pi / (2 * grid.lx / grid.nx))))
    kern = np.ones(2 * win + 1) / (2 * win + 1)
    env = np.convolve(per_column, kern, mode="same")
    spread = env.max() - env.min()
    scale = max(np.abs(env).max(), 1e-12)
    return float(spread / scale)


def _switch_to_localized(
    cont: Continuation, branch: Branch, bp_index: int,
) -> BranchPoint:
    """Switch at a (near-degenerate) branch point onto a modulated branch.

    The crossing eigenspace of the long-domain bean branch points is
    near-degenerate; combinations of its vectors seed fronts at different
    positions.  Candidates are Newton-corrected and the first one that
    leaves the parent branch with a clearly nonuniform oblique-mode
    envelope wins.
    """
    point = branch.points[bp_index]
    u_star = point.state.flat()
    jac = cont._jacobian(u_star, point.param)
    _, vecs = eigenpairs_near_zero(jac, cont.system.symmetric, k=2)
    v1 = vecs[:, 0] / np.abs(vecs[:, 0]).max()
    cands = [v1]
    if vecs.shape[1] > 1:
        v2 = vecs[:, 1] / np.abs(vecs[:, 1]).max()
        cands += [v2, (v1 + v2) / np.abs(v1 + v2).max(),
                  (v1 - v2) / np.abs(v1 - v2).max()]

    base = _modulation_ratio(point.state.values[0], cont.grid)
    fallback = None
    for delta in (0.02, 0.06, 0.15):
        for vec in cands:
            for sgn in (+1.0, -1.0):
                seed = u_star + sgn * delta * max(1.0, point.norm) * vec
                try:
                    cand = cont.newton_correct(seed, point.param)
                except (ConvergenceError, SingularSolveError):
                    continue
                dist = cand.state.flat() - u_star
                dist_norm = math.sqrt(cont._mean_dot(dist, dist))
                if dist_norm <= 10 * cont.settings.newton_tol:
                    continue
                ratio = _modulation_ratio(cand.state.values[0], cont.grid)
                if ratio > max(0.25, 3 * base):
                    cand.tags.add("start")
                    logger.info("localized switch: delta=%.3f ratio=%.2f dist=%.2e",
                                delta, ratio, dist_norm)
                    return cand
                if fallback is None:
                    fallback = cand
    if fallback is not None:
        logger.warning("no modulated candidate found; using first off-parent state")
        fallback.tags.add("start")
        return fallback
    raise SwitchError("no candidate left the parent branch at the bean branch point")


def snake_scenario(
    co: Coefficients,
    grid: Grid | None = None,
    snake_steps: int = 300,
    c1_start: float = 0.3,
) -> SnakeScenario:
    """Run the full cascade: stripes -> beans -> snaking connections.

    Follows the minus-phase stripe branch down from ``c1_start`` to its
    stability loss, switches onto the bean branch and localizes its first
    branch point, switches again onto the modulated branch and traces the
    snake.  Folds are localized and annotated with front positions against
    freshly converged hexagon templates.
    """
    grid = grid or fig3_grid()
    sys_ = SwiftHohenberg(co)

    s_root = max(am.scalar_equilibria(EquilibriumClass.STRIPE, co.with_c1(c1_start), 5),
                 key=lambda e: e.re1).re1
    sett_stripe = ContinuationSettings(
        ds0=0.01, ds_max=0.03, max_steps=60, param_min=0.05, param_max=0.9,
        n_eigs=24)
    cont = Continuation(sys_, grid, sett_stripe)
    seed = am.ansatz_field(AmplitudeVector.from_real(-s_root, 0.0, 0.0),
                           co.with_c1(c1_start), grid)
    p0 = cont.newton_correct(seed, c1_start)
    stripe = cont.continue_branch(p0, direction=-1)
    # trim once stripes are well past their first destabilization
    for stop, p in enumerate(stripe.points):
        if p.n_unstable >= 2:
            break
    stripe = stripe.segment(0, stop + 1)
    stripe = cont.detect_events(stripe)
    stripe_bps = stripe.tagged("branch-point")
    if not stripe_bps:
        raise RuntimeError("no branch point found on the stripe branch")
    bp0 = stripe_bps[0]
    stripe_bp_param = stripe.points[bp0].param

    bean0 = cont.branch_switch(stripe, bp0)
    sett_bean = ContinuationSettings(
        ds0=0.004, ds_max=0.02, max_steps=120, param_min=-0.4, param_max=0.8,
        n_eigs=24)
    cont_bean = Continuation(sys_, grid, sett_bean)

    def bean_score(br: Branch) -> float:
        _, b = mode_amplitudes(br.points[-1].state.values[0], grid)
        return abs(b)

    direction = _probe_direction(cont_bean, bean0, bean_score)
    bean = cont_bean.continue_branch(bean0, direction)

    # bean segment ends where the oblique and stripe modes merge (hexagons)
    end = len(bean.points)
    ratio_prev = 0.0
    for i, p in enumerate(bean.points):
        a, b = mode_amplitudes(p.state.values[0], grid)
        if abs(a) < 1e-8:
            continue
        ratio = abs(b / a)
        if ratio > 0.97 and ratio_prev > 0.9:
            end = i
            break
        ratio_prev = ratio
    bean_seg = bean.segment(0, max(end, 8))
    a_end, b_end = mode_amplitudes(bean_seg.points[-1].state.values[0], grid)
    hex_distance = abs(abs(b_end) - abs(a_end)) / max(abs(a_end), 1e-12)

    near_stripe = bean_seg.segment(0, min(len(bean_seg.points), 9))
    near_stripe = cont_bean.detect_events(near_stripe)
    bean_bps = near_stripe.tagged("branch-point")
    if not bean_bps:
        raise RuntimeError("no branch point found near the start of the bean branch")
    bean_bp_param = near_stripe.points[bean_bps[0]].param

    snake0 = _switch_to_localized(cont_bean, near_stripe, bean_bps[0])
    sett_snake = ContinuationSettings(
        ds0=0.003, ds_max=0.006, max_steps=snake_steps,
        param_min=-0.45, param_max=0.7, n_eigs=24)
    cont_snake = Continuation(sys_, grid, sett_snake)

    def snake_score(br: Branch) -> float:
        return -br.points[-1].param

    direction = _probe_direction(cont_snake, snake0, snake_score)
    snake = cont_snake.continue_branch(snake0, direction)
    snake = cont_snake.detect_events(snake, kinds=("fold",))
    fold_idx = snake.tagged("fold")
    fold_params = [snake.points[i].param for i in fold_idx]

    template_param = float(np.median(fold_params)) if fold_params else 0.0
    hp_root = select_branch_root(EquilibriumClass.UPHEX, co.with_c1(template_param))
    hm_root = select_branch_root(EquilibriumClass.DOWNHEX, co.with_c1(template_param))
    hp = cont.newton_correct(
        am.ansatz_field(hp_root, co.with_c1(template_param), grid),
        template_param, with_eigs=False)
    hm = cont.newton_correct(
        am.ansatz_field(hm_root, co.with_c1(template_param), grid),
        template_param, with_eigs=False)

    positions = []
    for i in fold_idx:
        try:
            positions.append(interface_position(
                snake.points[i].state, (hp.state, hm.state), grid))
        except Exception:
            positions.append(float("nan"))

    return SnakeScenario(
        grid=grid, stripe=stripe, stripe_bp_param=stripe_bp_param,
        bean=bean_seg, bean_bp_param=bean_bp_param,
        bean_end_hex_distance=hex_distance,
        snake=snake, fold_indices=fold_idx, fold_params=fold_params,
        fold_positions=positions, templates=(hp.state, hm.state),
        template_param=template_param,
    )


# ---------------------------------------------------------------------------
# amplitude predictions versus PDE branches (minimal cell)
# ---------------------------------------------------------------------------

@dataclass
class PatternComparison:
    """PDE branch of one pattern class against its amplitude prediction."""

    klass: EquilibriumClass
    predicted_interval: tuple[float, float]
    pde_stable_interval: tuple[float, float] | None
    samples: list[tuple[float, float, float]]  # (c1, measured, predicted)
    max_rel_error: float

    @property
    def intervals_overlap(self) -> bool:
        if self.pde_stable_interval is None:
            return False
        lo = max(self.predicted_interval[0], self.pde_stable_interval[0])
        hi = min(self.predicted_interval[1], self.pde_stable_interval[1])
        return hi > lo


def _predicted_peak(klass: EquilibriumClass, co: Coefficients) -> float | None:
    root = select_branch_root(klass, co)
    if root is None:
        return None
    if klass is EquilibriumClass.STRIPE:
        return 2 * co.eps * abs(root.re1)
    return 6 * co.eps * root.re1


def amplitude_vs_pde(
    klass: EquilibriumClass,
    co: Coefficients,
    grid: Grid,
    interval: tuple[float, float] | None = None,
    n_samples: int = 7,
) -> PatternComparison:
    """Continue one pattern branch across its predicted stable interval.

    The branch is seeded from the lattice ansatz at the interval midpoint
    and continued to both interval ends; ``u_max`` (or ``u_min`` for
    down-hexagons) is compared against the quintic-amplitude prediction on
    the interior two-thirds of the interval.
    """
    if interval is None:
        interval = stable_c1_interval(klass, co)
        if interval is None:
            raise ValueError(f"{klass.value} has no stable amplitude interval")
    lo, hi = interval
    mid = 0.5 * (lo + hi)
    pad = 0.35 * (hi - lo)
    sys_ = SwiftHohenberg(co)
    sett = ContinuationSettings(
        ds0=0.01, ds_max=0.04, max_steps=150,
        param_min=lo - pad, param_max=hi + pad, n_eigs=16)
    cont = Continuation(sys_, grid, sett)
    root = select_branch_root(klass, co.with_c1(mid))
    sign = -1.0 if klass is EquilibriumClass.STRIPE else 1.0
    seed = am.ansatz_field(
        AmplitudeVector.from_real(sign * root.re1,
                                  root.re2 if klass is not EquilibriumClass.STRIPE else 0.0,
                                  root.re3 if klass is not EquilibriumClass.STRIPE else 0.0),
        co.with_c1(mid), grid)
    start = cont.newton_correct(seed, mid)
    up = cont.continue_branch(start, direction=+1)
    down = cont.continue_branch(start, direction=-1)
    all_points = list(reversed(down.points[1:])) + up.points

    # keep only points that still belong to the class: continuation may
    # slide through junctions onto bean or mirror branches at the ends
    points = []
    for p in all_points:
        a, b = mode_amplitudes(p.state.values[0], grid)
        ar, br_ = a / (2 * co.eps), b / (2 * co.eps)
        scale = max(abs(ar), abs(br_), 1e-12)
        if klass is EquilibriumClass.STRIPE:
            ok = abs(br_) < 0.2 * scale
        elif klass is EquilibriumClass.UPHEX:
            ok = br_ > 0 and abs(ar - br_) < 0.2 * scale
        else:
            ok = br_ < 0 and abs(ar - br_) < 0.2 * scale
        if ok:
            points.append(p)
    if not points:
        raise RuntimeError(f"continuation lost the {klass.value} branch entirely")

    params = np.array([p.param for p in points])
    stable = np.array([p.n_unstable == 0 for p in points])
    pde_interval = None
    if stable.any():
        order = np.argsort(params)
        sp = params[order]
        sf = stable[order]
        runs = []
        i = 0
        while i < len(sp):
            if sf[i]:
                j = i
                while j + 1 < len(sp) and sf[j + 1]:
                    j += 1
                runs.append((sp[i], sp[j]))
                i = j + 1
            else:
                i += 1
        pde_interval = max(runs, key=lambda r: r[1] - r[0])

    sixth = (hi - lo) / 6.0
    targets = np.linspace(lo + sixth, hi - sixth, n_samples)
    stable_points = [p for p, s in zip(points, stable) if s] or points
    stable_params = np.array([p.param for p in stable_points])
    samples = []
    worst = 0.0
    for c1t in targets:
        pred = _predicted_peak(klass, co.with_c1(float(c1t)))
        if pred is None:
            continue
        i = int(np.argmin(np.abs(stable_params - c1t)))
        if abs(stable_params[i] - c1t) > 0.1 * (hi - lo):
            continue
        p = stable_points[i]
        measured = p.u_min if klass is EquilibriumClass.DOWNHEX else p.u_max
        samples.append((float(p.param), float(measured), float(pred)))
        worst = max(worst, abs(measured - pred) / abs(pred))

    return PatternComparison(
        klass=klass, predicted_interval=(lo, hi), pde_stable_interval=pde_interval,
        samples=samples, max_rel_error=worst,
    )


def stripe_fold_near_zero(
    co: Coefficients, nx: int = 32, ny: int = 4
) -> tuple[float, Branch]:
    """Trace the stripe branch through onset and localize its near-zero fold.

    At ``eps = 1`` the stripe branch turns around in the parameter
    extremely close to 0; the branch is followed from a small-amplitude
    stripe toward onset and the parameter reversal is localized.  Returns
    the fold parameter and the branch.
    """
    grid = Grid(lx=math.pi, ly=math.pi, nx=nx, ny=ny)
    sys_ = SwiftHohenberg(co)
    c1_seed = -1e-3
    # cubic coefficient of the effective stripe bifurcation (quadratic
    # feedback included) fixes the seed amplitude
    keff = -(0.75 * co.eps ** 2 * co.c3 + (19.0 / 18.0) * co.eps ** 6 * co.c2 ** 2)
    a0 = math.sqrt(max(co.eps ** 4 * abs(c1_seed) / abs(keff), 1e-12))
    seed = Field((a0 * np.cos(grid.x))[None, :, None] * np.ones((1, nx, ny)))
    sett = ContinuationSettings(
        ds0=2e-4, ds_min=1e-9, ds_max=2e-3, max_steps=120,
        param_min=-0.05, param_max=0.05, newton_tol=1e-10, n_eigs=8)
    cont = Continuation(sys_, grid, sett)
    start = cont.newton_correct(seed, c1_seed)
    br = cont.continue_branch(start, direction=+1)
    br = cont.detect_events(br, kinds=("fold",))
    folds = br.tagged("fold")
    if not folds:
        # the extremum may sit at the very closest-approach point
        lam = br.params()
        return float(lam.max()), br
    fold_params = [br.points[i].param for i in folds]
    best = min(fold_params, key=abs)
    return float(best), br


# ---------------------------------------------------------------------------
# vegetation tristability (minimal cell per beta)
# ---------------------------------------------------------------------------

def _intersect_runs(a: list[tuple[float, float]], b: list[tuple[float, float]]):
    out = []
    for lo1, hi1 in a:
        for lo2, hi2 in b:
            lo, hi = max(lo1, lo2), min(hi1, hi2)
            if hi > lo:
                out.append((lo, hi))
    return out


@dataclass
class VegTristability:
    """Stable precipitation runs of the three pattern classes."""

    beta: float
    kc: float
    turing_points: list[TuringPoint]
    stable_runs: dict[str, list[tuple[float, float]]]
    cell: Grid

    @property
    def stable_intervals(self) -> dict[str, tuple[float, float]]:
        return {k: max(v, key=lambda r: r[1] - r[0])
                for k, v in self.stable_runs.items() if v}

    @property
    def tristable_interval(self) -> tuple[float, float] | None:
        if len(self.stable_runs) < 3 or not all(self.stable_runs.values()):
            return None
        runs = list(self.stable_runs.values())
        common = runs[0]
        for other in runs[1:]:
            common = _intersect_runs(common, other)
        if not common:
            return None
        return max(common, key=lambda r: r[1] - r[0])


def veg_tristability(
    vp: VegParams,
    p_window: tuple[float, float] = (0.16, 0.55),
    nx: int = 24,
    ny: int = 16,
    max_steps: int = 160,
) -> VegTristability:
    """Continue H+, S, H- vegetation patterns on one hexagonal cell.

    Patterns are seeded at the upper Turing point (where the Fig-branches
    bifurcate) with the critical kinetics eigenvector and continued across
    the precipitation window; the largest stable interval per class is
    recorded.
    """
    pts = turing_locus(vp, p_window)
    if not pts:
        raise RuntimeError("no Turing points in the requested window")
    upper = max(pts, key=lambda t: t.p_c)
    kc = upper.k_c
    cell = Grid(lx=2 * math.pi / kc, ly=2 * math.pi / (math.sqrt(3.0) * kc),
                nx=nx, ny=ny)
    sys_ = Vegetation(vp)

    p_seed = upper.p_c - 0.01
    hom = [s for s in veg_homogeneous(vp, p_seed) if not s.trivial and s.n > 0]
    state = max(hom, key=lambda s: s.n)
    from .pde_systems import _veg_kinetics_jac
    a11, a12, a21, a22 = _veg_kinetics_jac(state.n, state.w, vp)
    k2 = kc * kc
    mat = np.array([[a11 - k2, a12],
                    [a21 + k2 * vp.delta * vp.beta, a22 - k2 * vp.delta]])
    w, v = np.linalg.eig(mat)
    vec = np.real(v[:, int(np.argmax(w.real))])
    if vec[0] < 0:
        vec = -vec

    sett = ContinuationSettings(
        ds0=0.004, ds_max=0.04, max_steps=max_steps,
        param_min=p_window[0] - 0.05, param_max=p_window[1] + 0.2, n_eigs=20)
    cont = Continuation(sys_, cell, sett)

    def pattern_like(point: BranchPoint) -> bool:
        n_comp = point.state.values[0]
        return float(n_comp.max() - n_comp.min()) > 1e-3

    def seed_class(name: str, weights, sign: float) -> BranchPoint | None:
        prof = hex_lattice_profile(cell, kc, *weights)
        prof = prof / np.abs(prof).max()
        # hexagons are transcritical and stripes subcritical at this Turing
        # point, while spots and stripes only stabilize deeper inside the
        # unstable range: try small amplitudes near onset and developed
        # amplitudes at mid-range precipitation
        trials = [(upper.p_c + dp, amp)
                  for dp in (-0.008, +0.008, -0.02, +0.02)
                  for amp in (0.01, 0.03, 0.08)]
        trials += [(frac * upper.p_c, amp)
                   for frac in (0.75, 0.65, 0.55, 0.5, 0.45)
                   for amp in (0.15, 0.30, 0.45, 0.60, 0.75)]
        for p_try, amp in trials:
            homs = [s for s in veg_homogeneous(vp, p_try)
                    if not s.trivial and s.n > 0]
            if not homs:
                continue
            h0 = max(homs, key=lambda s: s.n)
            vals = np.stack([
                np.maximum(h0.n + sign * amp * vec[0] * prof, 1e-4),
                np.maximum(h0.w + sign * amp * vec[1] * prof, 1e-4)])
            try:
                cand = cont.newton_correct(Field(vals), p_try, with_eigs=False)
            except (ConvergenceError, SingularSolveError):
                continue
            if not pattern_like(cand):
                continue
            dn = cand.state.values[0] - cand.state.values[0].mean()
            a, b = mode_amplitudes(dn, cell, kc)
            scale = max(abs(a), abs(b), 1e-12)
            accept = False
            if name == "S":
                accept = abs(a) > 1e-3 and abs(b) <= 0.35 * scale
            elif name in ("H+", "H-"):
                accept = abs(b) >= 0.25 * scale and (b > 0) == (name == "H+")
            if accept:
                return cont.newton_correct(cand.state, cand.param)
        return None

    specs = {
        "H+": ((1.0, 1.0, 1.0), +1.0),
        "H-": ((1.0, 1.0, 1.0), -1.0),
        "S": ((1.0, 0.0, 0.0), +1.0),
    }
    all_runs: dict[str, list[tuple[float, float]]] = {}
    for name, (weights, sign) in specs.items():
        start = seed_class(name, weights, sign)
        if start is None:
            logger.warning("vegetation %s: no pattern seed converged", name)
            continue
        down = cont.continue_branch(start, direction=-1)
        up = cont.continue_branch(start, direction=+1)
        pts_all = list(reversed(down.points[1:])) + up.points
        runs = []
        cur = None
        for p in pts_all:
            if p.n_unstable == 0 and pattern_like(p):
                if cur is None:
                    cur = [p.param, p.param]
                else:
                    cur[0] = min(cur[0], p.param)
                    cur[1] = max(cur[1], p.param)
            else:
                if cur is not None:
                    runs.append(tuple(cur))
                    cur = None
        if cur is not None:
            runs.append(tuple(cur))
        if runs:
            all_runs[name] = runs
    return VegTristability(
        beta=vp.beta, kc=kc, turing_points=pts,
        stable_runs=all_runs, cell=cell,
    )
