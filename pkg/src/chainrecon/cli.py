"""Command-line harness: single-shot builds and reconstructions plus the
ensemble experiments, all emitting deterministic CSV/JSON with a run
manifest beside every output file.

Config precedence is built-in defaults < ``--config`` JSON < explicit
flags. Floats are always emitted with 17 significant digits so that
flag-for-flag reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from datetime import datetime, timezone

import numpy as np

from . import __version__, charts
from .analysis import (
    DEFAULT_PRECISION,
    critical_length_sweep,
    error_profile,
    topology_compare,
)
from .ensemble import EnsembleConfig, TopologySpec
from .errors import ConvergenceError, UnsupportedSizeError, ValidationError
from .estimation import (
    estimation_errors,
    reconstruct_nearest_neighbor,
    reconstruct_next_nearest,
)
from .graph import CouplingGraph, is_zero_forcing_set, zero_forcing_closure
from .model import build_chain_hamiltonian, build_perturbed_hamiltonian, load_spec
from .spectral import eigendecompose, site_overlaps


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _default_epsilon_grid():
    return [0.0] + [float(e) for e in np.logspace(-6.0, -1.0, 13)]


def _parse_floats(text):
    return [float(part) for part in str(text).split(",") if part.strip() != ""]


def _parse_ints(text):
    return [int(part) for part in str(text).split(",") if part.strip() != ""]


def _parse_topology(text) -> TopologySpec:
    text = str(text).strip()
    if text.lower().startswith("file:"):
        path = text.split(":", 1)[1]
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        pairs = doc["edges"] if isinstance(doc, dict) else doc
        return TopologySpec(kind="fixed", pairs=tuple((int(i), int(j)) for i, j, *_ in pairs))
    return TopologySpec.parse(text)


@dataclass
class RunManifest:
    """Provenance record written beside every emitted data file."""

    subcommand: str
    config: dict
    master_seed: int | None
    started_at: str
    finished_at: str
    outputs: list
    artifact_version: str = __version__


def _now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _emit(text: str, out_path, extra_outputs=(), manifest_ctx=None):
    """Print to stdout or write to a file plus its run manifest."""
    if out_path is None:
        sys.stdout.write(text)
        return
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(text)
    if manifest_ctx is not None:
        subcommand, config, seed, started = manifest_ctx
        manifest = RunManifest(
            subcommand=subcommand,
            config=config,
            master_seed=seed,
            started_at=started,
            finished_at=_now(),
            outputs=[str(out_path)] + [str(p) for p in extra_outputs],
        )
        with open(f"{out_path}.manifest.json", "w", encoding="utf-8") as fh:
            json.dump(asdict(manifest), fh, indent=2)
            fh.write("\n")


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def _merge_config(defaults: dict, config_path, args, keys) -> dict:
    resolved = dict(defaults)
    if config_path:
        with open(config_path, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - set(defaults)
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        resolved.update(loaded)
    for key in keys:
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            resolved[key] = value
    return resolved


def _matrix_from_spec(path):
    chain, pert = load_spec(path)
    if pert is None:
        return chain, pert, build_chain_hamiltonian(chain)
    return chain, pert, build_perturbed_hamiltonian(chain, pert)


def _cmd_build(args):
    started = _now()
    chain, pert, h = _matrix_from_spec(args.spec)
    fmt = args.format or "json"
    if fmt == "json":
        doc = {"dim": chain.n_sites, "entries": [[float(x) for x in row] for row in h]}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = _csv(
            [f"col{j}" for j in range(1, chain.n_sites + 1)],
            [list(row) for row in h],
        )
    _emit(text, args.out, manifest_ctx=("build", {"spec": args.spec, "format": fmt}, None, started))
    return 0


def _cmd_spectrum(args):
    started = _now()
    chain, pert, h = _matrix_from_spec(args.spec)
    s = eigendecompose(h)
    w1 = site_overlaps(s, 1)
    w2 = site_overlaps(s, 2) if s.dim >= 2 else np.full(s.dim, np.nan)
    rows = [
        [k, s.eigenvalues[k - 1], w1[k - 1] ** 2, w2[k - 1] ** 2] for k in range(1, s.dim + 1)
    ]
    fmt = args.format or "csv"
    if fmt == "json":
        text = (
            json.dumps(
                {
                    "eigenvalues": [float(e) for e in s.eigenvalues],
                    "site1_sq_overlaps": [float(x) for x in w1**2],
                    "site2_sq_overlaps": [float(x) for x in w2**2],
                    "degenerate": s.degenerate,
                },
                indent=2,
            )
            + "\n"
        )
    else:
        text = _csv(["k", "e_k", "w1_k", "w2_k"], rows)
    _emit(
        text, args.out, manifest_ctx=("spectrum", {"spec": args.spec, "format": fmt}, None, started)
    )
    return 0


def _cmd_reconstruct(args):
    started = _now()
    chain, pert, h = _matrix_from_spec(args.spec)
    s = eigendecompose(h)
    extras = {}
    if args.recursion == "nnn":
        if pert is None or pert.epsilon <= 0.0:
            raise ValidationError("the nnn recursion needs a perturbation with epsilon > 0")
        res = reconstruct_next_nearest(
            s.eigenvalues, site_overlaps(s, 1), site_overlaps(s, 2), pert.epsilon
        )
        estimated = res.estimated_c
        deltas = estimation_errors(chain.nearest, estimated)
        extras = {"estimated_d": [float(x) for x in res.estimated_d]}
        breakdown = res.breakdown_at
    else:
        res = reconstruct_nearest_neighbor(
            s.eigenvalues, site_overlaps(s, 1), true_nearest=chain.nearest
        )
        estimated = res.estimated
        deltas = res.errors_delta
        breakdown = res.breakdown_at
    rows = [
        [n, chain.nearest[n - 1], estimated[n - 1], deltas[n - 1]]
        for n in range(1, len(estimated) + 1)
    ]
    fmt = args.format or "csv"
    if fmt == "json":
        doc = {
            "recursion": args.recursion,
            "c_true": list(chain.nearest),
            "c_est": [float(x) for x in estimated],
            "delta": [float(x) for x in deltas],
            "breakdown_at": breakdown,
            "degenerate_spectrum": s.degenerate,
        }
        doc.update(extras)
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = _csv(["n", "c_true", "c_est", "delta"], rows)
    config = {"spec": args.spec, "recursion": args.recursion, "format": fmt}
    _emit(text, args.out, manifest_ctx=("reconstruct", config, None, started))
    return 0


def _cmd_zero_forcing(args):
    started = _now()
    with open(args.graph, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    graph = CouplingGraph.from_edges(int(doc["n_vertices"]), doc.get("edges", []))
    initial = set(_parse_ints(args.initial))
    closure = zero_forcing_closure(graph, initial)
    verdict = is_zero_forcing_set(graph, initial)
    text = (
        f"closure: {' '.join(str(v) for v in sorted(closure))}\n"
        f"zero_forcing_set: {'true' if verdict else 'false'}\n"
    )
    if args.out:
        payload = {"closure": sorted(closure), "zero_forcing_set": verdict}
        _emit(
            json.dumps(payload, indent=2) + "\n",
            args.out,
            manifest_ctx=(
                "zero-forcing",
                {"graph": args.graph, "initial": sorted(initial)},
                None,
                started,
            ),
        )
    else:
        sys.stdout.write(text)
    return 0


_ENSEMBLE_DEFAULTS = {
    "sites": 20,
    "epsilon": None,
    "instances": 100,
    "seed": 0,
    "threshold": DEFAULT_PRECISION,
    "topology": "nnn",
    "workers": 1,
    "format": "csv",
}


def _ensemble_config(resolved, n_sites, epsilon_grid) -> EnsembleConfig:
    return EnsembleConfig(
        master_seed=int(resolved["seed"]),
        instances=int(resolved["instances"]),
        n_sites=int(n_sites),
        epsilon_grid=tuple(epsilon_grid),
        topology=_parse_topology(resolved["topology"]),
    )


def _cmd_error_profile(args):
    started = _now()
    resolved = _merge_config(
        _ENSEMBLE_DEFAULTS, args.config, args, ["sites", "epsilon", "instances", "seed", "topology", "workers", "format"]
    )
    if resolved["epsilon"] is None:
        raise ValidationError("error-profile requires --epsilon")
    epsilon = _parse_floats(resolved["epsilon"])[0]
    config = _ensemble_config(resolved, _parse_ints(resolved["sites"])[0], (epsilon,))
    profiles = error_profile(config, epsilon, workers=int(resolved["workers"]))
    rows = [
        [p.site, p.mean_delta, p.std_delta, p.bound, p.n_excluded] for p in profiles
    ]
    text = _csv(["n", "mean_delta", "std_delta", "bound", "n_excluded"], rows)
    svg_paths = []
    if args.svg and args.out:
        svg_path = f"{args.out}.svg"
        sites = [p.site for p in profiles]
        charts.write_line_chart(
            svg_path,
            [
                ("mean_delta", sites, [p.mean_delta for p in profiles]),
                ("bound", sites, [p.bound for p in profiles]),
            ],
            x_label="site n",
            y_label="error",
            log_y=True,
        )
        svg_paths.append(svg_path)
    resolved["epsilon"] = epsilon
    _emit(
        text,
        args.out,
        extra_outputs=svg_paths,
        manifest_ctx=("error-profile", resolved, config.master_seed, started),
    )
    return 0


def _cmd_critical_length(args):
    started = _now()
    resolved = _merge_config(
        _ENSEMBLE_DEFAULTS,
        args.config,
        args,
        ["sites", "epsilon", "instances", "seed", "threshold", "topology", "workers", "format"],
    )
    grid = (
        _parse_floats(resolved["epsilon"])
        if resolved["epsilon"] is not None
        else _default_epsilon_grid()
    )
    sites_list = _parse_ints(resolved["sites"])
    threshold = float(resolved["threshold"])
    rows = []
    by_n = {}
    for n_sites in sites_list:
        config = _ensemble_config(resolved, n_sites, grid)
        results = critical_length_sweep(config, threshold, workers=int(resolved["workers"]))
        by_n[n_sites] = results
        rows.extend(
            [r.epsilon, r.n_sites, r.mean_lc, r.std_lc, r.n_excluded] for r in results
        )
    text = _csv(["epsilon", "n_sites", "mean_Lc", "std_Lc", "n_excluded"], rows)
    svg_paths = []
    if args.svg and args.out:
        svg_path = f"{args.out}.svg"
        charts.write_line_chart(
            svg_path,
            [
                (f"N={n}", [r.epsilon for r in results], [r.mean_lc for r in results])
                for n, results in by_n.items()
            ],
            x_label="epsilon",
            y_label="critical length",
            log_x=True,
        )
        svg_paths.append(svg_path)
    resolved["epsilon"] = grid
    _emit(
        text,
        args.out,
        extra_outputs=svg_paths,
        manifest_ctx=("critical-length", resolved, int(resolved["seed"]), started),
    )
    return 0


def _cmd_topology_compare(args):
    started = _now()
    resolved = _merge_config(
        _ENSEMBLE_DEFAULTS,
        args.config,
        args,
        ["sites", "epsilon", "instances", "seed", "topology", "workers", "format"],
    )
    if resolved["epsilon"] is None:
        raise ValidationError("topology-compare requires --epsilon")
    epsilon = _parse_floats(resolved["epsilon"])[0]
    labels = [t.strip() for t in str(resolved["topology"]).split(",") if t.strip()]
    if len(labels) < 2:
        labels = ["nnn", "random"]
    variants = [(label, _parse_topology(label)) for label in labels]
    config = _ensemble_config(resolved, _parse_ints(resolved["sites"])[0], (epsilon,))
    compared = topology_compare(variants, config, epsilon, workers=int(resolved["workers"]))
    rows = []
    for label, profiles in compared:
        rows.extend(
            [label, p.site, p.mean_delta, p.std_delta, p.bound, p.n_excluded] for p in profiles
        )
    text = _csv(["label", "n", "mean_delta", "std_delta", "bound", "n_excluded"], rows)
    svg_paths = []
    if args.svg and args.out:
        svg_path = f"{args.out}.svg"
        charts.write_line_chart(
            svg_path,
            [
                (label, [p.site for p in profiles], [p.mean_delta for p in profiles])
                for label, profiles in compared
            ],
            x_label="site n",
            y_label="mean error",
            log_y=True,
        )
        svg_paths.append(svg_path)
    resolved["epsilon"] = epsilon
    resolved["topology"] = labels
    _emit(
        text,
        args.out,
        extra_outputs=svg_paths,
        manifest_ctx=("topology-compare", resolved, int(resolved["seed"]), started),
    )
    return 0


def _add_ensemble_flags(parser, threshold=False):
    parser.add_argument("--sites", help="site count, or comma list where supported")
    parser.add_argument("--epsilon", help="perturbation strength, or comma list")
    parser.add_argument("--instances", type=int, help="ensemble size")
    parser.add_argument("--seed", type=int, help="master seed")
    if threshold:
        parser.add_argument("--threshold", type=float, help="error precision for the critical length")
    parser.add_argument(
        "--topology", help="nnn | random[:count] | preset:<name> | file:<path>, comma list for compare"
    )
    parser.add_argument("--workers", type=int, help="parallel instance workers")
    parser.add_argument("--config", help="JSON config file (defaults < config < flags)")
    parser.add_argument("--format", choices=["csv", "json"], help="output encoding")
    parser.add_argument("--out", help="output file (default: stdout)")
    parser.add_argument("--svg", action="store_true", help="also write a simple SVG chart")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chainrecon",
        description="Reconstruct chain couplings from spectral data and "
        "measure how unknown longer-range couplings degrade the estimates.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("build", help="assemble a Hamiltonian matrix from a spec JSON")
    p.add_argument("spec", help="chain + perturbation spec JSON")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out")
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("spectrum", help="eigenvalues and site-1/2 squared overlaps")
    p.add_argument("spec")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("reconstruct", help="run a recursion and tabulate per-site errors")
    p.add_argument("spec")
    p.add_argument("--recursion", choices=["nn", "nnn"], default="nn")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out")
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("zero-forcing", help="closure and verdict for a measured-site set")
    p.add_argument("graph", help="graph JSON with n_vertices and an edge list")
    p.add_argument("--initial", required=True, help="comma list of initially blue vertices")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_zero_forcing)

    p = sub.add_parser("error-profile", help="ensemble mean/std of per-site errors")
    _add_ensemble_flags(p)
    p.set_defaults(func=_cmd_error_profile)

    p = sub.add_parser("critical-length", help="estimable length vs perturbation strength")
    _add_ensemble_flags(p, threshold=True)
    p.set_defaults(func=_cmd_critical_length)

    p = sub.add_parser("topology-compare", help="error profiles across topology variants")
    _add_ensemble_flags(p)
    p.set_defaults(func=_cmd_topology_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, UnsupportedSizeError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
