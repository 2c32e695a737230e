"""Command line driver.

One YAML document (validated against the shipped JSON schema, unknown
keys rejected) drives five subcommands:

    simulate    integrate one trajectory, record norms and snapshots
    attractor   approximate the pullback attractor at a time t
    hstar       bistability threshold plus a root-count table
    verify      run the inequality check battery
    sweep       attractor displacement under field perturbations

Every emitted CSV starts with a "# nlfield <version>" comment line; the
body below it is byte-stable for a fixed config and seed, with all
numbers printed at 17 significant digits.  Exit status: 0 success, 1 a
check failed or a run did not stabilize, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, replace
from importlib import resources

import jsonschema
import numpy as np
import yaml

from . import __version__
from .attractor import approximate_pullback_attractor, upper_semicontinuity_sweep
from .bifurcation import compute_h_star, count_roots
from .bounds import CHECK_NAMES, battery
from .dynamics import ExternalField, Nonlinearity, ProcessConfig, evolve
from .errors import ConfigError, GridTooCoarseError, NlfieldError
from .kernel import make_bump_kernel
from .weighted_space import Grid1D, WeightedField, WeightFunction, \
    finite_difference, weighted_norm

log = logging.getLogger(__name__)

_SCHEMA = None


def _schema() -> dict:
    global _SCHEMA
    if _SCHEMA is None:
        ref = resources.files("nlfield").joinpath("schema/config_schema.json")
        with ref.open(encoding="utf-8") as f:
            _SCHEMA = json.load(f)
    return _SCHEMA


@dataclass(frozen=True)
class SimulateBlock:
    tau: float
    t: float
    kind: str
    value: float
    norm: float
    snapshots: int


@dataclass(frozen=True)
class AttractorBlock:
    t: float
    tau_ladder: tuple[float, ...]
    n_samples: int


@dataclass(frozen=True)
class HstarBlock:
    h_ladder: tuple[float, ...] | None


@dataclass(frozen=True)
class VerifyBlock:
    checks: tuple[str, ...]
    samples: int


@dataclass(frozen=True)
class SweepBlock:
    t: float
    epsilons: tuple[float, ...]
    tau_ladder: tuple[float, ...]
    n_samples: int


@dataclass(frozen=True)
class ExperimentConfig:
    process: ProcessConfig
    seed: int
    out_dir: str
    simulate: SimulateBlock
    attractor: AttractorBlock
    hstar: HstarBlock
    verify: VerifyBlock
    sweep: SweepBlock


def _apply_defaults(node: dict, schema_node: dict, path: str):
    for key, sub in schema_node.get("properties", {}).items():
        here = f"{path}.{key}" if path else key
        if sub.get("type") == "object":
            node.setdefault(key, {})
            _apply_defaults(node[key], sub, here)
        elif key not in node and "default" in sub:
            node[key] = sub["default"]
            log.info("default applied: %s = %r", here, sub["default"])


def _check_ladder(ladder, t, path):
    if any(tau >= t for tau in ladder):
        raise ConfigError(f"every ladder rung must precede t = {t}", path)
    if any(b >= a for a, b in zip(ladder, ladder[1:])):
        raise ConfigError("ladder must be strictly decreasing", path)


def parse_config(text: str) -> ExperimentConfig:
    """Validate a YAML document and build the experiment description.

    Defaults from the schema are applied and echoed to the run log;
    violations carry the offending key path.
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError(f"not parseable as YAML: {e}")
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("top level must be a mapping")

    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise ConfigError(e.message, ".".join(str(q) for q in e.absolute_path))

    _apply_defaults(data, _schema(), "")

    weight = WeightFunction(data["weight"])
    try:
        grid = Grid1D(data["half_length"], data["n_points"])
    except ValueError as e:
        raise ConfigError(str(e), "half_length")
    try:
        kernel = make_bump_kernel(grid)
    except GridTooCoarseError as e:
        raise ConfigError(str(e), "n_points")

    g = Nonlinearity.tanh() if data["model"] == "tanh" else Nonlinearity.zero()
    fb = data["field"]
    try:
        field = ExternalField(fb["family"], fb["amplitude"], fb["omega"])
    except ValueError as e:
        raise ConfigError(str(e), "field")

    if field.family != "zero" and g.name == "tanh" and data["beta"] > 1.0:
        h_star = compute_h_star(data["beta"], g)
        if field.sup >= h_star:
            raise ConfigError(
                f"field amplitude {field.sup} is not below the bistability "
                f"threshold h* = {h_star:.6f} at beta = {data['beta']}",
                "field.amplitude")

    try:
        process = ProcessConfig(beta=data["beta"], p=float(data["p"]),
                                grid=grid, weight=weight, kernel=kernel,
                                nonlinearity=g, field=field, dt=data["dt"])
    except ValueError as e:
        raise ConfigError(str(e))

    sim = data["simulate"]
    sim_blk = SimulateBlock(tau=sim["tau"], t=sim["t"],
                            kind=sim["initial"]["kind"],
                            value=sim["initial"]["value"],
                            norm=sim["initial"]["norm"],
                            snapshots=sim["snapshots"])
    if sim_blk.t < sim_blk.tau:
        raise ConfigError("end time precedes start time", "simulate.t")

    att = data["attractor"]
    att_blk = AttractorBlock(t=att["t"], tau_ladder=tuple(att["tau_ladder"]),
                             n_samples=att["n_samples"])
    _check_ladder(att_blk.tau_ladder, att_blk.t, "attractor.tau_ladder")

    hs = data["hstar"]
    hs_blk = HstarBlock(h_ladder=tuple(hs["h_ladder"]) if "h_ladder" in hs else None)

    ver = data["verify"]
    ver_blk = VerifyBlock(checks=tuple(ver.get("checks", CHECK_NAMES)),
                          samples=ver["samples"])

    sw = data["sweep"]
    sw_blk = SweepBlock(t=sw["t"], epsilons=tuple(sw["epsilons"]),
                        tau_ladder=tuple(sw["tau_ladder"]),
                        n_samples=sw["n_samples"])
    _check_ladder(sw_blk.tau_ladder, sw_blk.t, "sweep.tau_ladder")

    return ExperimentConfig(process=process, seed=data["seed"],
                            out_dir=data["output"], simulate=sim_blk,
                            attractor=att_blk, hstar=hs_blk, verify=ver_blk,
                            sweep=sw_blk)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


def _write_csv(path: str, columns: list[str], rows) -> None:
    with open(path, "w", newline="") as f:
        f.write(f"# nlfield {__version__}\n")
        f.write(",".join(columns) + "\n")
        for row in rows:
            f.write(",".join(_fmt(v) for v in row) + "\n")
    log.info("wrote %s", path)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _initial_field(exp: ExperimentConfig) -> WeightedField:
    cfg = exp.process
    blk = exp.simulate
    if blk.kind == "constant":
        vals = np.full(cfg.grid.n_points, float(blk.value))
        return WeightedField(cfg.grid, cfg.weight, vals)
    rng = np.random.default_rng(exp.seed)
    x = cfg.grid.nodes
    u = np.zeros_like(x)
    for _ in range(6):
        u += rng.normal(scale=0.3) * np.cos(rng.uniform(0.05, 2.0) * x
                                            + rng.uniform(0, 2 * np.pi))
    u += rng.normal(scale=0.05, size=x.shape)
    f = WeightedField(cfg.grid, cfg.weight, u)
    n = weighted_norm(f, cfg.p)
    return f.with_values(u * (blk.norm / n))


def _cmd_simulate(exp: ExperimentConfig) -> int:
    cfg = exp.process
    blk = exp.simulate
    u0 = _initial_field(exp)
    mask = cfg.grid.interior_mask()
    rows = []
    fields = []

    def watch(s, vals):
        f = WeightedField(cfg.grid, cfg.weight, vals)
        rows.append((s, weighted_norm(f, cfg.p), float(np.max(np.abs(vals))),
                     float(np.max(np.abs(finite_difference(f).values[mask])))))
        if blk.snapshots > 0:
            fields.append((s, vals))

    evolve(u0, blk.tau, blk.t, cfg, observer=watch)
    _write_csv(os.path.join(exp.out_dir, "trajectory.csv"),
               ["t", "norm", "sup", "interior_max_slope"], rows)

    if blk.snapshots > 0:
        picks = np.unique(np.linspace(0, len(fields) - 1,
                                      min(blk.snapshots, len(fields))).round().astype(int))
        x = cfg.grid.nodes
        for i, idx in enumerate(picks):
            s, vals = fields[idx]
            _write_csv(os.path.join(exp.out_dir, f"snapshot_{i:03d}.csv"),
                       ["t", "x", "u"], ((s, xv, uv) for xv, uv in zip(x, vals)))
    return 0


def _cmd_attractor(exp: ExperimentConfig) -> int:
    cfg = exp.process
    blk = exp.attractor
    sample = approximate_pullback_attractor(blk.t, cfg, blk.n_samples,
                                            blk.tau_ladder, seed=exp.seed)
    x = cfg.grid.nodes
    _write_csv(os.path.join(exp.out_dir, "members.csv"),
               ["member", "x", "value"],
               ((i, xv, uv) for i, m in enumerate(sample.members)
                for xv, uv in zip(x, m.values)))
    meta = [("t", sample.t), ("n_members", len(sample)),
            ("converged", sample.converged), ("seed", sample.seed),
            ("config_digest", sample.digest),
            ("deepest_tau", min(sample.taus))]
    meta += [(f"rung_gap_{i}", g) for i, g in enumerate(sample.rung_gaps)]
    meta += [(f"member_norm_{i}", weighted_norm(m, cfg.p))
             for i, m in enumerate(sample.members)]
    _write_csv(os.path.join(exp.out_dir, "attractor_meta.csv"),
               ["key", "value"], meta)
    if not sample.converged:
        log.warning("attractor run did not stabilize over the ladder")
        return 1
    return 0


def _cmd_hstar(exp: ExperimentConfig) -> int:
    cfg = exp.process
    h_star = compute_h_star(cfg.beta, cfg.nonlinearity)
    ladder = exp.hstar.h_ladder
    if ladder is None:
        if h_star > 0.0:
            ladder = (0.0, 0.5 * h_star, max(h_star - 1e-3, 0.0),
                      h_star + 1e-3, 1.5 * h_star)
        else:
            ladder = (0.0, 0.25, 0.5)
    rows = [(h, count_roots(cfg.beta, h, cfg.nonlinearity).count) for h in ladder]
    _write_csv(os.path.join(exp.out_dir, "hstar.csv"), ["h", "root_count"], rows)
    print(f"h_star = {h_star:.17g}")
    return 0


def _cmd_verify(exp: ExperimentConfig) -> int:
    reports = battery(exp.process, names=exp.verify.checks,
                      samples=exp.verify.samples, seed=exp.seed)
    _write_csv(os.path.join(exp.out_dir, "verify.csv"),
               ["name", "theoretical", "measured", "margin", "passed",
                "seed", "config_digest"],
               ((r.name, r.theoretical, r.measured, r.margin, r.passed,
                 r.seed, r.digest) for r in reports))
    for r in reports:
        marker = "pass" if r.passed else "FAIL"
        log.info("%-20s %s  measured %.6g vs bound %.6g", r.name, marker,
                 r.measured, r.theoretical)
    return 0 if all(r.passed for r in reports) else 1


def _cmd_sweep(exp: ExperimentConfig) -> int:
    blk = exp.sweep
    curve = upper_semicontinuity_sweep(blk.t, exp.process, blk.epsilons,
                                       blk.n_samples, blk.tau_ladder,
                                       seed=exp.seed)
    _write_csv(os.path.join(exp.out_dir, "sweep.csv"),
               ["epsilon", "distance", "envelope", "converged"],
               zip(curve.epsilons, curve.distances, curve.envelopes,
                   curve.converged))
    if not all(curve.converged):
        log.warning("sweep contains non-stabilized attractor runs")
        return 1
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "attractor": _cmd_attractor,
    "hstar": _cmd_hstar,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nlfield",
        description="Numerical laboratory for a nonlocal evolution equation "
                    "in weighted L^p spaces")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "simulate": "integrate one trajectory and record norm diagnostics",
        "attractor": "approximate the pullback attractor at a fixed time",
        "hstar": "compute the bistability threshold and a root-count table",
        "verify": "run the inequality check battery",
        "sweep": "attractor displacement under shrinking field perturbations",
    }
    for name in _COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", required=True, help="YAML experiment file")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
        p.add_argument("--out", default=None,
                       help="override the output directory")
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")

    try:
        with open(args.config, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        print(f"error: cannot read config: {e}", file=sys.stderr)
        return 2

    try:
        exp = parse_config(text)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    if args.seed is not None:
        exp = replace(exp, seed=args.seed)
    if args.out is not None:
        exp = replace(exp, out_dir=args.out)
    os.makedirs(exp.out_dir, exist_ok=True)

    try:
        return _COMMANDS[args.command](exp)
    except NlfieldError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
