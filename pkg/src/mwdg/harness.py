"""Experiment layer: canonical problem setups, the time-integration driver
with detection/limiting hooks, and the CSV output products.

Outputs per run (all byte-reproducible for a fixed configuration):

* ``manifest.json`` — fully resolved configuration plus version stamp.
* ``history.csv`` — one row per flagged element per step
  (``step,time,element_i[,element_j][,mode]``) behind one ``#`` metadata
  line carrying element counts, step count and domain bounds so the file is
  self-describing.
* ``stats.csv`` — ``indicator,variables,C,avg_pct,max_pct`` (1D one row; 2D
  one row per detail mode plus the combined mask).
* ``snap_t<time>.csv`` — ``x[,y],component,value`` at element centers.

In limiter modes ``indicated`` and ``everywhere`` the history records the
elements actually limited (identical to the indicator set in the former); in
mode ``off`` it records the raw indicator flags.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dataclass_field, asdict
from pathlib import Path

import numpy as np

from . import __version__
from .basis import scaling_eval_all
from .boundary import (BoundarySet1D, BoundarySet2D, ConstantBC1D,
                       ConstantBC2D, FunctionBC1D, ReflectiveBC2D, SplitXBC2D)
from .errors import MwdgError
from .fields import Mesh1D, Mesh2D
from .indicators import (harten_indicate_1d, kxrcf_indicate_1d,
                         kxrcf_indicate_2d, mw_indicate_1d,
                         mw_indicate_2d)
from .limiter import (LimiterConfig, enforce_admissibility_1d,
                      enforce_admissibility_2d, limit_field_1d, limit_field_2d)
from .physics import Advection, Burgers, Euler1D, Euler2D
from .solver import (TimeStepperConfig, compute_dt, compute_rhs_1d,
                     compute_rhs_2d, default_cfl, project_initial_1d,
                     project_initial_2d, ssp_rk3_step)

GAMMA = 1.4


# -- problem registry ----------------------------------------------------------

@dataclass(frozen=True)
class Problem1D:
    name: str
    domain: tuple
    t_final: float
    level: int
    jumps: tuple
    law_factory: object
    ic: object            # ic(x) -> (ncomp, ...) conserved states
    bc_factory: object    # () -> BoundarySet1D
    dim = 1


@dataclass(frozen=True)
class Problem2D:
    name: str
    domain: tuple         # (ax, bx, ay, by)
    t_final: float
    levels: tuple
    law_factory: object
    ic: object
    bc_factory: object
    dim = 2


def _riemann_ic(left, right, split=0.0):
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)

    def ic(x):
        x = np.asarray(x)
        return np.where(x[None] < split, left.reshape(-1, *([1] * x.ndim)),
                        right.reshape(-1, *([1] * x.ndim)))
    return ic


def _euler_state(rho, vel, p, gamma=GAMMA):
    law = Euler1D(gamma)
    return np.array([rho, rho * vel, law.energy_from_primitive(rho, vel, p)])


def _sod():
    left = _euler_state(1.0, 0.0, 1.0)
    right = _euler_state(0.125, 0.0, 0.1)
    return Problem1D(
        name="sod", domain=(-5.0, 5.0), t_final=2.0, level=6, jumps=(0.0,),
        law_factory=lambda: Euler1D(GAMMA), ic=_riemann_ic(left, right),
        bc_factory=lambda: BoundarySet1D.constant(left, right))


def _lax():
    left = _euler_state(0.445, 0.698, 3.528)
    right = _euler_state(0.5, 0.0, 0.571)
    return Problem1D(
        name="lax", domain=(-5.0, 5.0), t_final=1.3, level=7, jumps=(0.0,),
        law_factory=lambda: Euler1D(GAMMA), ic=_riemann_ic(left, right),
        bc_factory=lambda: BoundarySet1D.constant(left, right))


def _blast():
    def ic(x):
        x = np.asarray(x)
        p = np.where(x < 0.1, 1000.0, np.where(x < 0.9, 0.01, 100.0))
        rho = np.ones_like(p)
        en = p / (GAMMA - 1.0)
        return np.stack([rho, np.zeros_like(p), en])
    return Problem1D(
        name="blast", domain=(0.0, 1.0), t_final=0.038, level=9,
        jumps=(0.1, 0.9), law_factory=lambda: Euler1D(GAMMA), ic=ic,
        bc_factory=lambda: BoundarySet1D.reflective(momentum_component=1))


def _shu_osher():
    left = _euler_state(3.857143, 2.629369, 10.33333)

    def ic(x):
        x = np.asarray(x)
        rho = np.where(x < -4.0, 3.857143, 1.0 + 0.2 * np.sin(5.0 * x))
        vel = np.where(x < -4.0, 2.629369, 0.0)
        p = np.where(x < -4.0, 10.33333, 1.0)
        en = p / (GAMMA - 1.0) + 0.5 * rho * vel * vel
        return np.stack([rho, rho * vel, en])

    # right boundary: the initial sine profile, which is the exact solution
    # there until waves arrive (a flat constant would inject a spurious jump)
    def right_state(x, t):
        return ic(np.asarray(x))

    return Problem1D(
        name="shu-osher", domain=(-5.0, 5.0), t_final=1.8, level=9,
        jumps=(-4.0,), law_factory=lambda: Euler1D(GAMMA), ic=ic,
        bc_factory=lambda: BoundarySet1D(ConstantBC1D(left),
                                         FunctionBC1D(right_state)))


def _advection():
    def ic(x):
        return np.sin(np.asarray(x))[None]
    return Problem1D(
        name="advection", domain=(0.0, 2.0 * math.pi),
        t_final=2.0 * math.pi, level=6, jumps=(),
        law_factory=lambda: Advection(1.0), ic=ic,
        bc_factory=BoundarySet1D.periodic)


def _burgers():
    def ic(x):
        return (0.5 + np.sin(np.asarray(x)))[None]
    return Problem1D(
        name="burgers", domain=(0.0, 2.0 * math.pi), t_final=1.5, level=7,
        jumps=(), law_factory=Burgers, ic=ic,
        bc_factory=BoundarySet1D.periodic)


DMR_LEFT = np.array([8.0, 8.25 * math.cos(math.pi / 6.0) * 8.0,
                     -8.25 * math.sin(math.pi / 6.0) * 8.0, 563.5])
DMR_RIGHT = np.array([1.4, 0.0, 0.0, 2.5])


def _double_mach():
    def ic(x, y):
        x = np.asarray(x)
        y = np.asarray(y)
        post = y - math.sqrt(3.0) * (x - 1.0 / 6.0) > 0.0
        shape = (-1,) + (1,) * x.ndim
        return np.where(post[None], DMR_LEFT.reshape(shape),
                        DMR_RIGHT.reshape(shape))

    def top_split(t):
        return 1.0 / 6.0 + (1.0 + 20.0 * t) / math.sqrt(3.0)

    def bcs():
        return BoundarySet2D(
            xlo=ConstantBC2D(DMR_LEFT),
            xhi=ConstantBC2D(DMR_RIGHT),
            ylo=SplitXBC2D(lambda t: 1.0 / 6.0, ConstantBC2D(DMR_LEFT),
                           ReflectiveBC2D(normal_momentum_component=2)),
            yhi=SplitXBC2D(top_split, ConstantBC2D(DMR_LEFT),
                           ConstantBC2D(DMR_RIGHT)),
        )
    return Problem2D(
        name="double-mach", domain=(0.0, 4.0, 0.0, 1.0), t_final=0.2,
        levels=(8, 6), law_factory=lambda: Euler2D(GAMMA), ic=ic,
        bc_factory=bcs)


_PROBLEMS = {p.name: p for p in
             (_sod(), _lax(), _blast(), _shu_osher(), _advection(),
              _burgers(), _double_mach())}
PROBLEM_NAMES = tuple(sorted(_PROBLEMS))


def get_problem(name: str):
    key = name.replace("_", "-").lower()
    if key not in _PROBLEMS:
        raise ValueError(f"unknown problem {name!r}; "
                         f"choose from {', '.join(PROBLEM_NAMES)}")
    return _PROBLEMS[key]


# -- configuration --------------------------------------------------------------

_COMPONENT_NAMES = {1: ("u",), 3: ("rho", "xmom", "energy"),
                    4: ("rho", "xmom", "ymom", "energy")}


@dataclass
class ExperimentConfig:
    problem: str
    k: int = 1
    n: int | None = None          # 1D dyadic level
    nx: int | None = None         # 2D levels
    ny: int | None = None
    indicator: str = "multiwavelet"
    c: float = 0.1
    c_alpha: float | None = None
    c_beta: float | None = None
    c_gamma: float | None = None
    harten_alpha: float = 1.5
    variables: str | None = None  # "density" | "density+entropy"
    limiter: str = "indicated"    # indicated | everywhere | off
    characteristic: bool = True
    cfl: float | None = None
    t_final: float | None = None
    stage_policy: str = "stage"
    snapshots: int = 100
    outdir: str = "out"

    def resolved(self) -> "ExperimentConfig":
        prob = get_problem(self.problem)
        cfg = ExperimentConfig(**asdict(self))
        cfg.problem = prob.name
        if cfg.indicator == "mw":
            cfg.indicator = "multiwavelet"
        if cfg.indicator not in ("multiwavelet", "kxrcf", "harten"):
            raise ValueError(f"unknown indicator {cfg.indicator!r}")
        if cfg.limiter not in ("indicated", "everywhere", "off"):
            raise ValueError(f"unknown limiter mode {cfg.limiter!r}")
        if cfg.variables is None:
            cfg.variables = ("density" if cfg.indicator == "multiwavelet"
                             else "density+entropy")
        if prob.dim == 1:
            cfg.n = prob.level if cfg.n is None else cfg.n
            cfg.nx = cfg.ny = None
        else:
            cfg.nx = prob.levels[0] if cfg.nx is None else cfg.nx
            cfg.ny = prob.levels[1] if cfg.ny is None else cfg.ny
            cfg.n = None
        for attr in ("c_alpha", "c_beta", "c_gamma"):
            if getattr(cfg, attr) is None:
                setattr(cfg, attr, cfg.c)
        cfg.cfl = default_cfl(cfg.k) if cfg.cfl is None else cfg.cfl
        cfg.t_final = prob.t_final if cfg.t_final is None else cfg.t_final
        return cfg

    def variable_tuple(self, law) -> tuple:
        if law.ncomp == 1:
            return ("u",)
        return tuple(self.variables.split("+"))


@dataclass
class RunOutputs:
    outdir: Path
    manifest_path: Path
    history_path: Path
    stats_path: Path
    snapshot_paths: list
    n_steps: int
    avg_pct: float
    max_pct: float
    per_mode: dict = dataclass_field(default_factory=dict)


# -- run loop -------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _indicate_1d(field, cfg: ExperimentConfig, law, bcs, t, variables):
    if cfg.indicator == "multiwavelet":
        return mw_indicate_1d(field, cfg.c, variables=variables, law=law)
    if cfg.indicator == "kxrcf":
        return kxrcf_indicate_1d(field, law, bcs, t, variables=variables)
    return harten_indicate_1d(field, law, bcs, t, alpha=cfg.harten_alpha,
                              variables=variables)


def run_experiment(config: ExperimentConfig) -> RunOutputs:
    """Integrate the configured problem to its final time, writing outputs."""
    cfg = config.resolved()
    prob = get_problem(cfg.problem)
    if prob.dim == 1:
        return _run_1d(cfg, prob)
    return _run_2d(cfg, prob)


def _output_times(cfg) -> list:
    if cfg.snapshots <= 0:
        return [cfg.t_final]
    times = [cfg.t_final * i / cfg.snapshots for i in range(1, cfg.snapshots)]
    times.append(cfg.t_final)
    return times


def _write_manifest(cfg, outdir, extra):
    payload = {"config": asdict(cfg), "version": __version__}
    payload.update(extra)
    path = outdir / "manifest.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def _snapshot_1d(field, path):
    names = _COMPONENT_NAMES[field.ncomp]
    centers = field.mesh.centers()
    phi0 = scaling_eval_all(field.k, 0.0)
    vals = np.einsum("cjl,l->cj", field.coeffs, phi0)
    with path.open("w") as fh:
        fh.write("x,component,value\n")
        for ci, name in enumerate(names):
            for j in range(centers.size):
                fh.write(f"{_fmt(centers[j])},{name},{_fmt(vals[ci, j])}\n")


def _snapshot_2d(field, path):
    names = _COMPONENT_NAMES[field.ncomp]
    xc = field.mesh.xcenters()
    yc = field.mesh.ycenters()
    phi0 = scaling_eval_all(field.k, 0.0)
    vals = np.einsum("cijlm,l,m->cij", field.coeffs, phi0, phi0)
    with path.open("w") as fh:
        fh.write("x,y,component,value\n")
        for ci, name in enumerate(names):
            for i in range(xc.size):
                for j in range(yc.size):
                    fh.write(f"{_fmt(xc[i])},{_fmt(yc[j])},{name},"
                             f"{_fmt(vals[ci, i, j])}\n")


def _run_1d(cfg: ExperimentConfig, prob: Problem1D) -> RunOutputs:
    mesh = Mesh1D(cfg.n, prob.domain[0], prob.domain[1])
    law = prob.law_factory()
    bcs = prob.bc_factory()
    variables = cfg.variable_tuple(law)
    field = project_initial_1d(prob.ic, mesh, cfg.k, law.ncomp,
                               jumps=prob.jumps)
    stepper = TimeStepperConfig(cfl=cfg.cfl, t_final=cfg.t_final,
                                stage_policy=cfg.stage_policy)
    lim_cfg = LimiterConfig(enabled=cfg.limiter != "off",
                            characteristic=cfg.characteristic)
    euler = getattr(law, "is_admissible", None) is not None
    if euler:
        # projection of strong jumps can overshoot into invalid states
        enforce_admissibility_1d(field, law, bcs, 0.0, lim_cfg)

    # detectors that project pressure-derived quantities cannot read raw
    # stage states (overshoots near shocks make them invalid); everything
    # else indicates on the raw field, limits, then runs the global
    # positivity sweep before the next residual evaluation
    pre_enforce = euler and "entropy" in variables

    def stage_hook(f, t_stage, final):
        if euler and pre_enforce:
            enforce_admissibility_1d(f, law, bcs, t_stage, lim_cfg)
        if cfg.stage_policy == "step" and not final:
            if euler:
                enforce_admissibility_1d(f, law, bcs, t_stage, lim_cfg)
            return None
        ts = _indicate_1d(f, cfg, law, bcs, t_stage, variables)
        if cfg.limiter == "indicated":
            limit_field_1d(f, ts.flags, law, bcs, t_stage, lim_cfg)
            recorded = ts.flags
        elif cfg.limiter == "everywhere":
            all_mask = np.ones(f.mesh.n_elements, dtype=bool)
            limit_field_1d(f, all_mask, law, bcs, t_stage, lim_cfg)
            recorded = all_mask
        else:
            recorded = ts.flags
        if euler:
            enforce_admissibility_1d(f, law, bcs, t_stage, lim_cfg)
        return recorded

    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    snapshot_paths = []

    def snap(tag_time, f):
        p = outdir / f"snap_t{tag_time:.6f}.csv"
        _snapshot_1d(f, p)
        snapshot_paths.append(p)

    snap(0.0, field)
    pending = _output_times(cfg)
    rows = []           # (step, time, element)
    counts = []
    t = 0.0
    step = 0
    rhs = lambda f, time: compute_rhs_1d(f, law, bcs, time)
    while t < cfg.t_final - 1e-14:
        dt = compute_dt(field, law, stepper.cfl, stepper.max_dt)
        target = pending[0] if pending else cfg.t_final
        dt = min(dt, target - t, cfg.t_final - t)
        recorded = ssp_rk3_step(field, t, dt, rhs, stage_hook)
        t += dt
        step += 1
        if recorded is None:
            recorded = np.zeros(mesh.n_elements, dtype=bool)
        idx = np.flatnonzero(recorded)
        counts.append(idx.size)
        rows.extend((step - 1, t, int(j)) for j in idx)
        while pending and t >= pending[0] - 1e-12:
            snap(pending.pop(0), field)

    n = mesh.n_elements
    history_path = outdir / "history.csv"
    with history_path.open("w") as fh:
        fh.write(f"# schema=troubled-history dim=1 elements={n} "
                 f"steps={step} domain={_fmt(mesh.a)},{_fmt(mesh.b)}\n")
        fh.write("step,time,element_i\n")
        for r in rows:
            fh.write(f"{r[0]},{_fmt(r[1])},{r[2]}\n")

    pct = 100.0 * np.asarray(counts, dtype=float) / n if counts else \
        np.zeros(1)
    avg_pct = float(pct.mean())
    max_pct = float(pct.max())
    stats_path = outdir / "stats.csv"
    with stats_path.open("w") as fh:
        fh.write("indicator,variables,C,avg_pct,max_pct\n")
        cval = _fmt(cfg.c) if cfg.indicator == "multiwavelet" else ""
        fh.write(f"{cfg.indicator},{cfg.variables},{cval},"
                 f"{_fmt(avg_pct)},{_fmt(max_pct)}\n")

    manifest = _write_manifest(cfg, outdir, {
        "steps": step, "elements": n, "avg_pct": avg_pct, "max_pct": max_pct})
    return RunOutputs(outdir=outdir, manifest_path=manifest,
                      history_path=history_path, stats_path=stats_path,
                      snapshot_paths=snapshot_paths, n_steps=step,
                      avg_pct=avg_pct, max_pct=max_pct)


def _run_2d(cfg: ExperimentConfig, prob: Problem2D) -> RunOutputs:
    ax, bx, ay, by = prob.domain
    mesh = Mesh2D(cfg.nx, cfg.ny, ax, bx, ay, by)
    law = prob.law_factory()
    bcs = prob.bc_factory()
    variables = cfg.variable_tuple(law)
    field = project_initial_2d(prob.ic, mesh, cfg.k, law.ncomp)
    lim_cfg = LimiterConfig(enabled=cfg.limiter != "off",
                            characteristic=cfg.characteristic)
    enforce_admissibility_2d(field, law, bcs, 0.0, lim_cfg)

    def indicate(f, t_stage):
        if cfg.indicator == "multiwavelet":
            return mw_indicate_2d(f, cfg.c_alpha, cfg.c_beta, cfg.c_gamma,
                                  variables=variables, law=law)
        if cfg.indicator == "kxrcf":
            return kxrcf_indicate_2d(f, law, bcs, t_stage,
                                     variables=variables)
        raise MwdgError("subcell-resolution indication is 1D only")

    pre_enforce = "entropy" in variables

    def stage_hook(f, t_stage, final):
        if pre_enforce:
            enforce_admissibility_2d(f, law, bcs, t_stage, lim_cfg)
        if cfg.stage_policy == "step" and not final:
            if not pre_enforce:
                enforce_admissibility_2d(f, law, bcs, t_stage, lim_cfg)
            return None
        ts = indicate(f, t_stage)
        if cfg.limiter == "indicated":
            limit_field_2d(f, ts.combined, law, bcs, t_stage, lim_cfg)
        elif cfg.limiter == "everywhere":
            limit_field_2d(f, np.ones((mesh.nx, mesh.ny), dtype=bool), law,
                           bcs, t_stage, lim_cfg)
        enforce_admissibility_2d(f, law, bcs, t_stage, lim_cfg)
        return ts

    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    snapshot_paths = []

    def snap(tag_time, f):
        p = outdir / f"snap_t{tag_time:.6f}.csv"
        _snapshot_2d(f, p)
        snapshot_paths.append(p)

    snap(0.0, field)
    pending = _output_times(cfg)
    rows = []
    mode_counts = {"alpha": [], "beta": [], "gamma": [], "comb": []}
    t = 0.0
    step = 0
    rhs = lambda f, time: compute_rhs_2d(f, law, bcs, time)
    while t < cfg.t_final - 1e-14:
        dt = compute_dt(field, law, cfg.cfl)
        target = pending[0] if pending else cfg.t_final
        dt = min(dt, target - t, cfg.t_final - t)
        ts = ssp_rk3_step(field, t, dt, rhs, stage_hook)
        t += dt
        step += 1
        if cfg.limiter == "everywhere":
            comb = np.ones((mesh.nx, mesh.ny), dtype=bool)
        else:
            comb = ts.combined
        for mode, mask in (("alpha", np.repeat(ts.alpha_flags, 2, axis=0)),
                           ("beta", np.repeat(ts.beta_flags, 2, axis=1)),
                           ("gamma", ts.gamma_flags), ("comb", comb)):
            ii, jj = np.nonzero(mask)
            mode_counts[mode].append(ii.size)
            rows.extend((step - 1, t, int(a), int(b), mode)
                        for a, b in zip(ii, jj))
        while pending and t >= pending[0] - 1e-12:
            snap(pending.pop(0), field)

    total = mesh.nx * mesh.ny
    history_path = outdir / "history.csv"
    with history_path.open("w") as fh:
        fh.write(f"# schema=troubled-history dim=2 elements={total} "
                 f"nx={mesh.nx} ny={mesh.ny} steps={step} "
                 f"domain={_fmt(ax)},{_fmt(bx)},{_fmt(ay)},{_fmt(by)}\n")
        fh.write("step,time,element_i,element_j,mode\n")
        for r in rows:
            fh.write(f"{r[0]},{_fmt(r[1])},{r[2]},{r[3]},{r[4]}\n")

    per_mode = {}
    stats_path = outdir / "stats.csv"
    with stats_path.open("w") as fh:
        fh.write("indicator,variables,C,avg_pct,max_pct\n")
        cvals = {"alpha": cfg.c_alpha, "beta": cfg.c_beta,
                 "gamma": cfg.c_gamma,
                 "comb": f"{cfg.c_alpha};{cfg.c_beta};{cfg.c_gamma}"}
        for mode in ("alpha", "beta", "gamma", "comb"):
            pct = 100.0 * np.asarray(mode_counts[mode], dtype=float) / total
            per_mode[mode] = (float(pct.mean()), float(pct.max()))
            cstr = cvals[mode] if cfg.indicator == "multiwavelet" else ""
            if isinstance(cstr, float):
                cstr = _fmt(cstr)
            fh.write(f"{cfg.indicator}[{mode}],{cfg.variables},{cstr},"
                     f"{_fmt(per_mode[mode][0])},{_fmt(per_mode[mode][1])}\n")

    avg_pct, max_pct = per_mode["comb"]
    manifest = _write_manifest(cfg, outdir, {
        "steps": step, "elements": total, "avg_pct": avg_pct,
        "max_pct": max_pct, "per_mode": per_mode})
    return RunOutputs(outdir=outdir, manifest_path=manifest,
                      history_path=history_path, stats_path=stats_path,
                      snapshot_paths=snapshot_paths, n_steps=step,
                      avg_pct=avg_pct, max_pct=max_pct, per_mode=per_mode)


# -- statistics -----------------------------------------------------------------

def parse_history(path) -> dict:
    """Read a history file: metadata plus rows grouped by step."""
    path = Path(path)
    meta = {}
    rows = []
    with path.open() as fh:
        header = None
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    if "=" in tok:
                        key, val = tok.split("=", 1)
                        meta[key] = val
                continue
            if header is None:
                header = line.split(",")
                continue
            rows.append(line.split(","))
    if header is None:
        raise ValueError(f"{path}: empty history file")
    return {"meta": meta, "header": header, "rows": rows}


def compute_stats(history_path, mode: str | None = None):
    """(average %, maximum %) of flagged elements per step.

    Steps with no flagged elements count as zero; the step and element
    totals come from the file's metadata line.
    """
    data = parse_history(history_path)
    meta = data["meta"]
    if "elements" not in meta or "steps" not in meta:
        raise ValueError("history file lacks the metadata line")
    total = int(meta["elements"])
    n_steps = int(meta["steps"])
    if n_steps <= 0:
        raise ValueError("history covers no steps")
    header = data["header"]
    has_mode = "mode" in header
    if mode is None and has_mode:
        mode = "comb"
    counts = np.zeros(n_steps)
    step_col = header.index("step")
    mode_col = header.index("mode") if has_mode else None
    for row in data["rows"]:
        if has_mode and row[mode_col] != mode:
            continue
        counts[int(row[step_col])] += 1
    pct = 100.0 * counts / total
    return float(pct.mean()), float(pct.max())


def reference_solution(problem: str, level: int, k: int = 2,
                       out: str | Path = "reference.csv",
                       cfl: float | None = None) -> Path:
    """High-resolution self-reference: same solver, finer mesh, writes the
    density profile (columns x,value) for plot overlays."""
    prob = get_problem(problem)
    if prob.dim != 1:
        raise ValueError("reference profiles are 1D")
    out = Path(out)
    cfg = ExperimentConfig(problem=problem, k=k, n=level, c=0.1,
                           indicator="multiwavelet", limiter="indicated",
                           cfl=cfl, snapshots=0,
                           outdir=str(out.parent / f"_ref_{prob.name}"))
    result = run_experiment(cfg)
    final_snap = result.snapshot_paths[-1]
    with final_snap.open() as fh, out.open("w") as dst:
        dst.write("x,value\n")
        next(fh)
        comp = "rho" if prob.law_factory().ncomp > 1 else "u"
        for line in fh:
            x, name, val = line.strip().split(",")
            if name == comp:
                dst.write(f"{x},{val}\n")
    return out
