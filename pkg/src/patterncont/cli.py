"""Configuration-driven command line front end.

``patterncont <mode> --config <file> [--out <dir>] [--override k=v]...``
executes one analysis pipeline and writes its artifacts plus a JSON
manifest listing every produced file with its role and the exact resolved
configuration.  Exit codes: 0 success, 2 configuration error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import amplitude as am
from . import conserved, pde_systems, scenarios
from .amplitude import AmplitudeVector, Coefficients, EquilibriumClass
from .continuation import Branch, Continuation, ContinuationSettings
from .errors import PatternContError
from .pde_systems import Field, Grid, SwiftHohenberg, VegParams, Vegetation

logger = logging.getLogger(__name__)

MODES = ("ampl-map", "ampl-branch", "turing", "branch", "switch", "snake",
         "energy", "maxwell")

_CLASS_BY_NAME = {
    "H+": EquilibriumClass.UPHEX,
    "S": EquilibriumClass.STRIPE,
    "H-": EquilibriumClass.DOWNHEX,
}


class ConfigError(Exception):
    """Carries the list of per-field validation problems."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass
class RunConfig:
    """Validated, normalized run description."""

    mode: str
    system: str
    co: Coefficients | None
    vp: VegParams | None
    grid: Grid | None
    options: dict
    output_dir: str
    raw: dict = field(default_factory=dict)


def parse_length(value, path: str, errors: list[str]) -> float | None:
    """Accept plain numbers, ``"<x>pi"`` and ``"<x>pi/sqrt3"`` strings."""
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        s = value.strip().lower().replace(" ", "")
        try:
            if s.endswith("pi/sqrt3"):
                prefix = s[: -len("pi/sqrt3")] or "1"
                return float(prefix) * math.pi / math.sqrt(3.0)
            if s.endswith("pi"):
                prefix = s[:-2] or "1"
                return float(prefix) * math.pi
            return float(s)
        except ValueError:
            pass
    errors.append(f"{path}: cannot parse length {value!r} (use a number or '<x>pi')")
    return None


def _get(cfg: dict, path: str, default=None):
    node = cfg
    for part in path.split("."):
        if not isinstance(node, dict) or part not in node:
            return default
        node = node[part]
    return node


def _require(cfg: dict, path: str, errors: list[str], kind=None):
    val = _get(cfg, path, None)
    if val is None:
        errors.append(f"{path}: required option missing")
        return None
    if kind is not None and not isinstance(val, kind):
        errors.append(f"{path}: expected {kind}, got {type(val).__name__}")
        return None
    return val


def _build_settings(opts: dict | None) -> ContinuationSettings:
    return ContinuationSettings(**(opts or {}))


def validate(config: dict) -> RunConfig:
    """Schema-check and normalize a configuration; never runs numerics.

    Raises :class:`ConfigError` carrying one message per violation, each
    prefixed with the config path of the offending field.
    """
    errors: list[str] = []
    mode = _get(config, "mode")
    if mode not in MODES:
        errors.append(f"mode: must be one of {MODES}, got {mode!r}")
    system = _get(config, "system", "sh")
    if system not in ("sh", "veg"):
        errors.append(f"system: must be 'sh' or 'veg', got {system!r}")

    co = vp = None
    params = _get(config, "params", {})
    if not isinstance(params, dict):
        errors.append("params: must be an object")
        params = {}
    if system == "sh":
        try:
            co = Coefficients(
                c1=float(params.get("c1", 0.0)), c2=float(params.get("c2", 0.0)),
                c3=float(params.get("c3", -1.0)), c4=float(params.get("c4", 0.0)),
                c5=float(params.get("c5", 0.0)), eps=float(params.get("eps", 1.0)),
                c0=float(params.get("c0", 4.0)))
        except (TypeError, ValueError) as exc:
            errors.append(f"params: {exc}")
    else:
        try:
            vp = VegParams(
                gamma=float(params.get("gamma", 1.6)), sigma=float(params.get("sigma", 1.6)),
                nu=float(params.get("nu", 0.2)), rho=float(params.get("rho", 1.5)),
                beta=float(params.get("beta", 3.0)), delta=float(params.get("delta", 100.0)),
                p=float(params.get("p", 0.3)))
        except (TypeError, ValueError) as exc:
            errors.append(f"params: {exc}")

    grid = None
    domain = _get(config, "domain")
    if domain is not None:
        if not isinstance(domain, dict):
            errors.append("domain: must be an object")
        else:
            lx = parse_length(_require(domain, "lx", errors), "domain.lx", errors) \
                if "lx" in domain else errors.append("domain.lx: required option missing")
            ly = parse_length(domain.get("ly"), "domain.ly", errors) \
                if "ly" in domain else errors.append("domain.ly: required option missing")
            if not errors:
                kc = float(domain.get("kc", 1.0))
                nx = domain.get("nx")
                ny = domain.get("ny")
                try:
                    grid = Grid.for_domain(lx, ly, kc=kc, nx=nx, ny=ny)
                except (TypeError, ValueError) as exc:
                    errors.append(f"domain: {exc}")

    options = {k: v for k, v in config.items()
               if k not in ("mode", "system", "params", "domain", "output_dir")}

    # mode-specific requirements
    if mode == "turing" and system != "veg":
        errors.append("system: turing mode requires the vegetation system")
    if mode in ("branch", "snake") and system == "sh" and co is None:
        pass  # already reported
    if mode == "branch":
        _require(config, "branch.seed", errors, str)
        if _get(config, "branch.param_start") is None:
            errors.append("branch.param_start: required option missing")
    if mode == "switch":
        for key in ("switch.parent_field", "switch.event_param"):
            _require(config, key, errors)
        pf = _get(config, "switch.parent_field")
        if isinstance(pf, str) and not Path(pf).exists():
            errors.append(f"switch.parent_field: file not found: {pf}")
    if mode == "maxwell":
        pairs = _get(config, "maxwell.pairs")
        if not pairs:
            errors.append("maxwell.pairs: required option missing")
        else:
            for i, pair in enumerate(pairs):
                if (not isinstance(pair, (list, tuple)) or len(pair) != 2
                        or any(p not in _CLASS_BY_NAME for p in pair)):
                    errors.append(
                        f"maxwell.pairs[{i}]: expected a pair drawn from "
                        f"{sorted(_CLASS_BY_NAME)}, got {pair!r}")
    if mode == "energy":
        q = _get(config, "energy.quantity", "Ep")
        if q not in ("Ep", "Hamiltonian"):
            errors.append(f"energy.quantity: must be 'Ep' or 'Hamiltonian', got {q!r}")

    sett = _get(config, "settings")
    if sett is not None:
        try:
            _build_settings(sett)
        except (TypeError, ValueError) as exc:
            errors.append(f"settings: {exc}")

    if errors:
        raise ConfigError(errors)
    return RunConfig(mode=mode, system=system, co=co, vp=vp, grid=grid,
                     options=options, output_dir=str(_get(config, "output_dir", "out")),
                     raw=config)


# ---------------------------------------------------------------------------
# artifact bookkeeping
# ---------------------------------------------------------------------------

class Artifacts:
    def __init__(self, outdir: Path):
        self.outdir = outdir
        self.files: list[dict] = []
        outdir.mkdir(parents=True, exist_ok=True)

    def path(self, name: str, role: str) -> Path:
        p = self.outdir / name
        self.files.append({"path": name, "role": role})
        return p

    def add_existing(self, paths: list[str], role: str) -> None:
        for p in paths:
            rel = str(Path(p).relative_to(self.outdir))
            self.files.append({"path": rel, "role": role})

    def manifest(self, config: RunConfig, extra: dict | None = None) -> Path:
        doc = {
            "mode": config.mode,
            "system": config.system,
            "config": config.raw,
            "files": sorted(self.files, key=lambda f: f["path"]),
        }
        if extra:
            doc["results"] = extra
        path = self.outdir / "manifest.json"
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        self.files.append({"path": "manifest.json", "role": "manifest"})
        return path


# ---------------------------------------------------------------------------
# mode implementations
# ---------------------------------------------------------------------------

def _run_ampl_map(cfg: RunConfig, art: Artifacts) -> dict:
    opts = cfg.options.get("map", {})
    c1_range = tuple(opts.get("c1_range", am.DEFAULT_MAP_WINDOW[0]))
    c2_range = tuple(opts.get("c2_range", am.DEFAULT_MAP_WINDOW[1]))
    resolution = opts.get("resolution", 200)
    order = opts.get("order", 5)
    m = am.stability_map(c1_range, c2_range, resolution, cfg.co, order=order)
    m.to_csv(art.path("map.csv", "map-csv"))
    am.write_map_legend(art.path("map_legend.csv", "legend"))
    return {"region_counts": m.region_counts(), "n_failed": m.n_failed}


def _run_ampl_branch(cfg: RunConfig, art: Artifacts) -> dict:
    opts = cfg.options.get("ampl_branch", {})
    c1_lo, c1_hi = opts.get("c1_range", (-0.3, 1.0))
    n = opts.get("n", 141)
    order = opts.get("order", 5)
    rows = []
    for c1 in np.linspace(c1_lo, c1_hi, n):
        coc = cfg.co.with_c1(float(c1))
        for name, klass in _CLASS_BY_NAME.items():
            for e in am.scalar_equilibria(klass, coc, order):
                verdict = am.classify_stability(e, coc, order)
                _, ep, _ = am.gl_energies(e, (0, 0, 0), coc)
                peak = (2 if klass is EquilibriumClass.STRIPE else 6) * coc.eps * e.re1
                rows.append((c1, name, e.re1, int(verdict.stable), ep, peak))
    path = art.path("ampl_branches.csv", "branch-csv")
    with open(path, "w") as fh:
        fh.write("c1,class,amplitude,stable,Ep,u_peak\n")
        for c1, name, a, s, ep, pk in rows:
            fh.write(f"{c1:.17g},{name},{a:.17g},{s},{ep:.17g},{pk:.17g}\n")
    return {"n_rows": len(rows)}


def _run_turing(cfg: RunConfig, art: Artifacts) -> dict:
    opts = cfg.options.get("turing", {})
    p_range = tuple(opts.get("p_range", (0.16, 0.55)))
    vp = cfg.vp
    p0 = vp.nu / (vp.gamma - vp.nu * vp.sigma)
    points = pde_systems.turing_locus(vp, p_range)
    report = {
        "p0": p0,
        "turing_points": [{"p": t.p_c, "k_c": t.k_c} for t in points],
    }
    if points:
        report["onset"] = min(t.p_c for t in points)
        report["restabilization"] = max(t.p_c for t in points)
        report["k_c_restabilization"] = max(points, key=lambda t: t.p_c).k_c
    with open(art.path("turing_report.json", "report"), "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return report


def _make_system(cfg: RunConfig):
    return SwiftHohenberg(cfg.co) if cfg.system == "sh" else Vegetation(cfg.vp)


def _seed_field(cfg: RunConfig, grid: Grid, kind: str, param: float) -> Field:
    sys_name = cfg.system
    if kind == "zero":
        ncomp = 1 if sys_name == "sh" else 2
        return Field.zeros(grid, ncomp)
    if sys_name != "sh":
        raise PatternContError(f"seed kind {kind!r} is only available for the SH system")
    coc = cfg.co.with_c1(param)
    if kind in _CLASS_BY_NAME:
        root = conserved.select_branch_root(_CLASS_BY_NAME[kind], coc)
        if root is None:
            raise PatternContError(f"no {kind} amplitude root at c1={param}")
        if kind == "S":
            root = AmplitudeVector.from_real(-root.re1, 0.0, 0.0)
        return am.ansatz_field(root, coc, grid)
    if kind == "file":
        path = cfg.options.get("branch", {}).get("seed_file")
        fld, fgrid, _ = pde_systems.load_field(path)
        if (fgrid.nx, fgrid.ny) != (grid.nx, grid.ny):
            vals = np.stack([fgrid.resample(c, grid) for c in fld.values])
            fld = Field(vals)
        return fld
    raise PatternContError(f"unknown seed kind {kind!r}")


def _export_branch(branch: Branch, grid: Grid, system_name: str,
                   art: Artifacts, name: str, stride: int) -> None:
    branch.to_csv(art.path(f"{name}.csv", "branch-csv"))
    written = branch.save_fields(art.outdir / f"{name}_fields", grid,
                                 system_name, stride=stride)
    art.add_existing(written, "field")


def _run_branch(cfg: RunConfig, art: Artifacts) -> dict:
    opts = cfg.options.get("branch", {})
    sys_ = _make_system(cfg)
    grid = cfg.grid
    if grid is None:
        raise PatternContError("branch mode requires a domain")
    settings = _build_settings(cfg.options.get("settings"))
    cont = Continuation(sys_, grid, settings)
    param0 = float(opts["param_start"])
    seed = _seed_field(cfg, grid, opts["seed"], param0)
    start = cont.newton_correct(seed, param0)
    branch = cont.continue_branch(start, direction=int(opts.get("direction", 1)))
    if opts.get("detect_events", True):
        branch = cont.detect_events(branch)
    _export_branch(branch, grid, sys_.name, art, "branch", int(opts.get("stride", 0)))
    return {
        "n_points": len(branch),
        "param_range": [float(branch.params().min()), float(branch.params().max())],
        "events": {tag: len(branch.tagged(tag)) for tag in ("fold", "branch-point")},
    }


def _run_switch(cfg: RunConfig, art: Artifacts) -> dict:
    opts = cfg.options["switch"]
    sys_ = _make_system(cfg)
    fld, fgrid, _ = pde_systems.load_field(opts["parent_field"])
    grid = cfg.grid or fgrid
    settings = _build_settings(cfg.options.get("settings"))
    cont = Continuation(sys_, grid, settings)
    param = float(opts["event_param"])
    parent = cont.newton_correct(fld, param)
    parent.tags.add("branch-point")
    pseudo = Branch(points=[parent], meta={"system": sys_.name})
    new0 = cont.branch_switch(pseudo, 0)
    branch = cont.continue_branch(new0, direction=int(opts.get("direction", 1)))
    if opts.get("detect_events", True):
        branch = cont.detect_events(branch)
    _export_branch(branch, grid, sys_.name, art, "switched", int(opts.get("stride", 0)))
    return {"n_points": len(branch),
            "param_range": [float(branch.params().min()), float(branch.params().max())]}


def _run_snake(cfg: RunConfig, art: Artifacts) -> dict:
    opts = cfg.options.get("snake", {})
    grid = cfg.grid or scenarios.fig3_grid()
    result = scenarios.snake_scenario(
        cfg.co, grid, snake_steps=int(opts.get("snake_steps", 300)),
        c1_start=float(opts.get("c1_start", 0.3)))
    stride = int(opts.get("stride", 25))
    _export_branch(result.stripe, grid, "sh", art, "stripe", stride)
    _export_branch(result.bean, grid, "sh", art, "bean", stride)
    _export_branch(result.snake, grid, "sh", art, "snake", stride)
    pde_systems.save_field(art.path("template_hplus.field", "field"),
                           result.templates[0], grid, "sh")
    pde_systems.save_field(art.path("template_hminus.field", "field"),
                           result.templates[1], grid, "sh")
    report = {
        "stripe_bp_param": result.stripe_bp_param,
        "bean_bp_param": result.bean_bp_param,
        "bean_end_hex_distance": result.bean_end_hex_distance,
        "fold_params": result.fold_params,
        "fold_positions": result.fold_positions,
        "alternating": result.alternating_folds(),
        "same_side_shifts": result.same_side_shifts(),
        "template_param": result.template_param,
    }
    with open(art.path("snake_report.json", "report"), "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return report


def _run_energy(cfg: RunConfig, art: Artifacts) -> dict:
    opts = cfg.options.get("energy", {})
    quantity = opts.get("quantity", "Ep")
    lo, hi = opts.get("c1_range", (-0.1, 0.5))
    n = int(opts.get("n", 61))
    scaled = bool(opts.get("scaled", True))
    curve = conserved.energy_curves(
        quantity, cfg.co, np.linspace(lo, hi, n), grid=cfg.grid, scaled=scaled)
    curve.to_csv(art.path("energy.csv", "energy-csv"))
    present = {k.value: int(np.sum(~np.isnan(v))) for k, v in curve.values.items()}
    return {"quantity": quantity, "samples_present": present}


def _run_maxwell(cfg: RunConfig, art: Artifacts) -> dict:
    opts = cfg.options["maxwell"]
    quantity = opts.get("quantity", "Hamiltonian")
    bracket = tuple(opts.get("bracket", (-0.1, 0.4)))
    scaled = bool(opts.get("scaled", True))
    out = {}
    for pair in opts["pairs"]:
        ka, kb = _CLASS_BY_NAME[pair[0]], _CLASS_BY_NAME[pair[1]]
        key = f"({pair[0]},{pair[1]})"
        try:
            out[key] = conserved.maxwell_point(
                (ka, kb), quantity, cfg.co, bracket, grid=cfg.grid, scaled=scaled)
        except PatternContError as exc:
            out[key] = f"error: {exc}"
    with open(art.path("maxwell.json", "report"), "w") as fh:
        json.dump({"quantity": quantity, "bracket": bracket, "points": out},
                  fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out


_RUNNERS = {
    "ampl-map": _run_ampl_map,
    "ampl-branch": _run_ampl_branch,
    "turing": _run_turing,
    "branch": _run_branch,
    "switch": _run_switch,
    "snake": _run_snake,
    "energy": _run_energy,
    "maxwell": _run_maxwell,
}


def run(config: RunConfig) -> Path:
    """Execute a validated configuration; returns the manifest path."""
    art = Artifacts(Path(config.output_dir))
    results = _RUNNERS[config.mode](config, art)
    return art.manifest(config, extra=results)


# ---------------------------------------------------------------------------
# command line entry point
# ---------------------------------------------------------------------------

def apply_overrides(config: dict, overrides: list[str]) -> dict:
    for item in overrides:
        if "=" not in item:
            raise ConfigError([f"override {item!r}: expected key=value"])
        key, _, raw = item.partition("=")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = config
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError([f"override {key}: {part} is not an object"])
        node[parts[-1]] = value
    return config


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="patterncont",
        description="pattern-formation continuation toolkit")
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--config", required=True, help="JSON configuration file")
    parser.add_argument("--out", help="output directory (overrides config)")
    parser.add_argument("--override", action="append", default=[],
                        metavar="KEY=VALUE", help="dotted-path config override")
    parser.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")

    try:
        with open(args.config) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {args.config}: {exc}", file=sys.stderr)
        return 2

    raw["mode"] = args.mode
    if args.out:
        raw["output_dir"] = args.out
    try:
        raw = apply_overrides(raw, args.override)
        config = validate(raw)
    except ConfigError as exc:
        for err in exc.errors:
            print(f"config error: {err}", file=sys.stderr)
        return 2

    try:
        manifest = run(config)
    except (PatternContError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 3
    print(manifest)
    return 0


if __name__ == "__main__":
    sys.exit(main())
