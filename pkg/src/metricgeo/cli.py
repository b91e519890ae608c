"""Command-line surface: scriptable checks and generators with JSON reports.

Check subcommands print a schema-versioned report object to standard
output (diagnostics go to standard error) and exit 0 on pass, 1 when a
violation or witness was found, 2 on malformed input or bad parameters.
``gen`` subcommands emit the space/graph/curve document itself plus a
metadata block, so their output pipes straight into the check commands.
Reports are byte-identical across runs for the same inputs and seed,
except for the "timing" field. Stochastic subcommands require --seed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import atb, core, curves, formats, generators, graphs, sra
from .errors import MetricGeoError

SCHEMA_VERSION = 1

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2


def _digest(path) -> dict:
    if str(path) == "-":
        return {"path": "-", "sha256": None}
    data = Path(path).read_bytes()
    return {"path": str(path), "sha256": hashlib.sha256(data).hexdigest()}


def _emit(text: str, output) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _report(args, verdict: str, payload: dict, inputs=(), seed=None, started=None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": args._command_echo,
        "inputs": [_digest(p) for p in inputs],
        "seed": seed,
        "verdict": verdict,
        "payload": payload,
        "timing": {"seconds": round(time.perf_counter() - started, 6) if started else None},
    }


def _finish(args, report: dict) -> int:
    _emit(json.dumps(report, sort_keys=True, indent=2) + "\n", args.output)
    return EXIT_PASS if report["verdict"] in ("pass", "ok") else EXIT_VIOLATION


def _resolve_subset(space, metadata, spec: str):
    """Subset spec: 'all', a designated-list name from metadata, or comma-separated points."""
    if spec == "all":
        return list(range(space.n))
    designated = (metadata or {}).get("designated", {})
    if spec in designated:
        return [space.index(p) for p in designated[spec]]
    points = []
    for token in spec.split(","):
        token = token.strip()
        points.append(int(token) if token.lstrip("-").isdigit() else token)
    return space.indices(points)


def _point(space, token):
    return space.index(int(token) if str(token).lstrip("-").isdigit() else token)


def _vectors(text: str) -> list[tuple[int, ...]]:
    """Parse '1,0;-1,0;0,1;0,-1' into integer vectors."""
    return [tuple(int(c) for c in part.split(",")) for part in text.split(";") if part.strip()]


def _floats(text: str) -> list[float]:
    return [float(c) for c in text.split(",") if c.strip()]


def _matrix(text: str) -> np.ndarray:
    return np.array([_floats(row) for row in text.split(";")], dtype=float)


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_validate(args):
    t0 = time.perf_counter()
    space, _ = formats.load_space(args.space, tolerance=args.tolerance)
    report = core.validate_metric(space)
    payload = {
        "passed": report.passed,
        "n_points": space.n,
        "violations": [list(v) for v in report.violations[:100]],
        "violation_count": len(report.violations),
    }
    verdict = "pass" if report.passed else "violation"
    return _finish(args, _report(args, verdict, payload, inputs=[args.space], started=t0))


def _cmd_sra_check(args):
    t0 = time.perf_counter()
    space, meta = formats.load_space(args.space, tolerance=args.tolerance)
    subset = _resolve_subset(space, meta, args.subset)
    report = sra.verify_sra_set(space, subset, args.alpha)
    payload = {
        "verdict": "pass" if report.passed else "fail",
        "alpha": args.alpha,
        "subset": subset,
        "checked_triples": report.checked_triples,
        "witness": None
        if report.witness is None
        else {
            "x": report.witness.x,
            "z": report.witness.z,
            "y": report.witness.y,
            "lhs": report.witness.lhs,
            "rhs": report.witness.rhs,
        },
    }
    verdict = "pass" if report.passed else "violation"
    return _finish(args, _report(args, verdict, payload, inputs=[args.space], started=t0))


def _cmd_sra_max(args):
    t0 = time.perf_counter()
    space, _ = formats.load_space(args.space, tolerance=args.tolerance)
    mode = "greedy" if args.greedy else "exact"
    result = sra.max_sra_subset(space, args.alpha, mode=mode)
    payload = {
        "alpha": args.alpha,
        "subset": list(result.points),
        "labels": [space.labels[i] for i in result.points],
        "cardinality": len(result.points),
        "optimal": result.optimal,
        "mode": mode,
    }
    return _finish(args, _report(args, "pass", payload, inputs=[args.space], started=t0))


def _cmd_angle(args):
    t0 = time.perf_counter()
    space, _ = formats.load_space(args.space, tolerance=args.tolerance)
    angle = core.comparison_angle(
        space, _point(space, args.x), _point(space, args.z), _point(space, args.y)
    )
    payload = {"radians": angle.radians, "degrees": angle.degrees, "vertex": args.z}
    return _finish(args, _report(args, "pass", payload, inputs=[args.space], started=t0))


def _cmd_atb_point(args):
    t0 = time.perf_counter()
    space, meta = formats.load_space(args.space, tolerance=args.tolerance)
    p = _point(space, args.p)
    candidates = _resolve_subset(space, meta, args.candidates)
    candidates = [c for c in candidates if c != p]
    witness = atb.max_angle_separated(
        space, p, args.epsilon, candidates, radius=args.radius
    )
    payload = {
        "center": p,
        "epsilon": args.epsilon,
        "cardinality": witness.cardinality,
        "separated_points": list(witness.points),
        "exact": witness.exact,
        "scope": "empirical over the supplied candidates, not a proof over a ball",
    }
    verdict = "pass"
    if args.l is not None:
        payload["l"] = args.l
        payload["atb_holds_at_l"] = witness.satisfies_atb(args.l)
        verdict = "pass" if witness.satisfies_atb(args.l) else "violation"
    return _finish(args, _report(args, verdict, payload, inputs=[args.space], started=t0))


def _cmd_atb_star(args):
    t0 = time.perf_counter()
    graph, meta = formats.load_graph(args.graph)
    space = graph.to_metric_space()
    geos = graphs.GeodesicSet(graph)
    p = _point(space, args.p)
    targets = _resolve_subset(space, meta, args.targets)
    targets = [t for t in targets if t != p]
    result = atb.atb_star_check(space, geos, p, args.epsilon, targets)
    payload = {
        "center": p,
        "epsilon": args.epsilon,
        "beta": result.beta,
        "targets": list(result.targets),
        "witness_pair": list(result.witness_pair) if result.witness_pair else None,
        "note": result.note,
    }
    verdict = "pass" if result.passed else "violation"
    return _finish(args, _report(args, verdict, payload, inputs=[args.graph], started=t0))


def _cmd_beta(args):
    t0 = time.perf_counter()
    payload = {"epsilon": args.epsilon, "beta": atb.compute_beta(args.epsilon)}
    return _finish(args, _report(args, "pass", payload, started=t0))


def _cmd_bound_nl(args):
    t0 = time.perf_counter()
    cert = sra.compute_sra_free_bound(args.l)
    payload = {
        "l": cert.l,
        "n": cert.n,
        "chain": [{"i": i, "h": h, "exact": e} for i, h, e in cert.chain],
        "exact": cert.exact,
    }
    return _finish(args, _report(args, "pass", payload, started=t0))


def _cmd_bound_ntilde(args):
    t0 = time.perf_counter()
    threshold = sra.doubling_threshold(args.alpha)
    payload = {"alpha": threshold.alpha, "n_tilde": threshold.n_tilde}
    return _finish(args, _report(args, "pass", payload, started=t0))


def _cmd_curve_check(args):
    t0 = time.perf_counter()
    curve, _ = formats.load_curve(args.curve)
    report = curves.is_self_contracted(curve)
    payload = {
        "passed": report.passed,
        "witness": list(report.witness) if report.witness else None,
        "points": len(curve),
    }
    verdict = "pass" if report.passed else "violation"
    return _finish(args, _report(args, verdict, payload, inputs=[args.curve], started=t0))


def _cmd_curve_length(args):
    t0 = time.perf_counter()
    curve, _ = formats.load_curve(args.curve)
    report = curves.curve_length(curve)
    payload = {"polygonal_length": report.polygonal_length, "points": len(curve)}
    return _finish(args, _report(args, "pass", payload, inputs=[args.curve], started=t0))


def _cmd_curve_extract(args):
    t0 = time.perf_counter()
    curve, _ = formats.load_curve(args.curve)
    found = curves.extract_sra_from_curve(curve, args.alpha, args.target_size)
    payload = {
        "alpha": args.alpha,
        "target_size": args.target_size,
        "found": found is not None,
        "positions": list(found) if found else None,
    }
    verdict = "pass" if found is not None else "violation"
    return _finish(args, _report(args, verdict, payload, inputs=[args.curve], started=t0))


def _cmd_descend(args):
    t0 = time.perf_counter()
    objective = args.objective if args.matrix is None else _matrix(args.matrix)
    spec = curves.DescentSpec(
        objective=objective,
        start=tuple(_floats(args.start)),
        step=args.step,
        iterations=args.iterations,
        norm=args.norm,
    )
    curve = curves.gradient_descent_trajectory(spec)
    check = curves.is_self_contracted(curve)
    payload = {
        "iterations": args.iterations,
        "step": args.step,
        "norm": args.norm,
        "self_contracted": check.passed,
        "witness": list(check.witness) if check.witness else None,
        "curve": json.loads(formats.curve_to_json(curve)),
    }
    verdict = "pass" if check.passed else "violation"
    return _finish(args, _report(args, verdict, payload, started=t0))


def _cmd_quasiconvex(args):
    t0 = time.perf_counter()
    report = curves.quasi_convexity_sample(
        args.objective, dim=args.dim, trials=args.trials, seed=args.seed, norm=args.norm
    )
    payload = {
        "objective": args.objective,
        "trials": args.trials,
        "passed": report.passed,
        "counterexample": None
        if report.counterexample is None
        else {
            "x": list(report.counterexample[0]),
            "y": list(report.counterexample[1]),
            "t": report.counterexample[2],
        },
    }
    verdict = "pass" if report.passed else "violation"
    return _finish(args, _report(args, verdict, payload, seed=args.seed, started=t0))


def _cmd_doubling(args):
    t0 = time.perf_counter()
    space, _ = formats.load_space(args.space, tolerance=args.tolerance)
    centers = [_point(space, c) for c in args.centers.split(",")]
    estimate = core.doubling_estimate(space, centers, _floats(args.radii))
    payload = {
        "constant": estimate.constant,
        "scales_tested": [[str(c), r] for c, r in estimate.scales_tested],
        "method": estimate.method,
        "notices": list(estimate.notices),
    }
    return _finish(args, _report(args, "pass", payload, inputs=[args.space], started=t0))


def _cmd_separated(args):
    t0 = time.perf_counter()
    space, meta = formats.load_space(args.space, tolerance=args.tolerance)
    within = None if args.within is None else _resolve_subset(space, meta, args.within)
    result = core.max_separated_subset(space, args.r, within=within)
    payload = {
        "r": args.r,
        "subset": list(result.points),
        "cardinality": len(result.points),
        "exact": result.exact,
    }
    return _finish(args, _report(args, "pass", payload, inputs=[args.space], started=t0))


def _cmd_lrb(args):
    t0 = time.perf_counter()
    graph, _ = formats.load_graph(args.graph)
    estimate = atb.lrb_constant_estimate(
        graph, int(args.p), args.horizon, t_samples=args.t_samples
    )
    payload = {
        "center": estimate.center,
        "horizon": estimate.horizon,
        "constant": estimate.constant,
        "samples": estimate.samples,
    }
    return _finish(args, _report(args, "pass", payload, inputs=[args.graph], started=t0))


def _cmd_stable_norm(args):
    t0 = time.perf_counter()
    estimate = generators.stable_norm_estimate(
        _vectors(args.generators), tuple(_vectors(args.g)[0]), args.k_max
    )
    payload = {
        "element": list(estimate.element),
        "k_max": estimate.k_max,
        "values": list(estimate.values),
        "estimate": estimate.estimate,
        "lower": estimate.lower,
        "upper": estimate.upper,
        "bracket_width": estimate.bracket_width,
        "two_c_empirical": estimate.two_c_empirical,
    }
    return _finish(args, _report(args, "pass", payload, started=t0))


# --- gen subcommands emit documents directly ---


def _cmd_gen_laakso(args):
    graph = generators.laakso_graph(args.level)
    if args.sra_points is not None:
        space, meta = generators.laakso_points_space(graph, args.sra_points)
        _emit(formats.space_to_json(space, meta), args.output)
        return EXIT_PASS
    meta = {
        "construction": {"family": "laakso", "level": args.level},
        "root": graph.root,
        "top": graph.top,
        "edge_length": graph.edge_length,
        "branch_tags": {
            str(v): {"left": outs[0], "right": outs[1]}
            for v, outs in enumerate(graph.out_lists)
            if len(outs) == 2
        },
    }
    if args.space:
        _emit(formats.space_to_json(graph.to_metric_space(), meta), args.output)
    else:
        _emit(formats.graph_to_json(graph.graph, meta), args.output)
    return EXIT_PASS


def _cmd_gen_broom(args):
    sequence = args.sequence if args.heights is None else _floats(args.heights)
    tree = generators.broom_tree(sequence, n=args.n)
    meta = {
        "construction": {
            "family": "broom",
            "sequence": args.sequence if args.heights is None else "explicit",
            "heights": list(tree.heights),
        },
        "designated": {
            "tips": list(tree.tip_indices),
            "spine": list(tree.spine_indices),
            "root": [tree.root_index],
        },
    }
    _emit(formats.space_to_json(tree.space, meta), args.output)
    return EXIT_PASS


def _cmd_gen_heisenberg(args):
    span = tuple(_floats(args.span))
    meta = {"construction": {"family": "heisenberg-axis", "steps": args.steps, "span": list(span)}}
    if args.curve:
        curve = generators.heisenberg_axis_curve(args.steps, span)
        _emit(formats.curve_to_json(curve, meta), args.output)
    else:
        space = generators.heisenberg_axis(args.steps, span)
        _emit(formats.space_to_json(space, meta), args.output)
    return EXIT_PASS


def _cmd_gen_cayley(args):
    gens = _vectors(args.generators)
    space = generators.word_ball_space(gens, args.radius)
    meta = {
        "construction": {
            "family": "cayley-ball",
            "generators": [list(g) for g in gens],
            "radius": args.radius,
        }
    }
    _emit(formats.space_to_json(space, meta), args.output)
    return EXIT_PASS


def _cmd_gen_sample(args):
    space = generators.normed_sample(args.dim, args.norm, args.count, args.seed)
    meta = {
        "construction": {
            "family": "normed-sample",
            "dim": args.dim,
            "norm": args.norm,
            "count": args.count,
            "seed": args.seed,
        }
    }
    _emit(formats.space_to_json(space, meta), args.output)
    return EXIT_PASS


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metricgeo",
        description="Rough-angle conditions, self-contracted curves, and benchmark spaces "
        "on finite metric spaces. Reports are JSON on stdout; exit 0 pass, 1 violation, "
        "2 bad input.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", help="write the JSON document here instead of stdout")
        p.add_argument("--tolerance", type=float, default=None, help="override space tolerance")

    p = sub.add_parser("validate", help="check the metric axioms of a space file")
    common(p)
    p.add_argument("space")
    p.set_defaults(func=_cmd_validate)

    sra_parser = sub.add_parser("sra", help="small-rough-angle condition checks")
    sra_sub = sra_parser.add_subparsers(dest="subcommand", required=True)
    p = sra_sub.add_parser("check", help="verify SRA(alpha) on a subset")
    common(p)
    p.add_argument("space")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--subset", default="all", help="'all', a designated list name, or points")
    p.set_defaults(func=_cmd_sra_check)
    p = sra_sub.add_parser("max", help="maximum SRA(alpha) subset")
    common(p)
    p.add_argument("space")
    p.add_argument("--alpha", type=float, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=True)
    mode.add_argument("--greedy", action="store_true")
    p.set_defaults(func=_cmd_sra_max)

    p = sub.add_parser("angle", help="Euclidean comparison angle at z")
    common(p)
    p.add_argument("space")
    p.add_argument("--x", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(func=_cmd_angle)

    atb_parser = sub.add_parser("atb", help="angular total boundedness checks")
    atb_sub = atb_parser.add_subparsers(dest="subcommand", required=True)
    p = atb_sub.add_parser("point", help="max angle-separated candidate subset at p")
    common(p)
    p.add_argument("space")
    p.add_argument("--p", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--candidates", default="all")
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--l", type=int, default=None, help="assert cardinality < L")
    p.set_defaults(func=_cmd_atb_point)
    p = atb_sub.add_parser("star", help="geodesic-proximity ATB* check on a graph")
    common(p)
    p.add_argument("graph")
    p.add_argument("--p", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--targets", default="all")
    p.set_defaults(func=_cmd_atb_star)

    p = sub.add_parser("beta", help="the ATB*-to-ATB proximity constant beta(epsilon)")
    common(p)
    p.add_argument("--epsilon", type=float, required=True)
    p.set_defaults(func=_cmd_beta)

    bound_parser = sub.add_parser("bound", help="Ramsey-recursion and doubling thresholds")
    bound_sub = bound_parser.add_subparsers(dest="subcommand", required=True)
    p = bound_sub.add_parser("n-of-l", help="point bound N(L) via the Ramsey recursion")
    common(p)
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(func=_cmd_bound_nl)
    p = bound_sub.add_parser("ntilde", help="smallest n with alpha*(n-2) >= 3")
    common(p)
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(func=_cmd_bound_ntilde)

    curve_parser = sub.add_parser("curve", help="discrete curve analysis")
    curve_sub = curve_parser.add_subparsers(dest="subcommand", required=True)
    p = curve_sub.add_parser("check", help="self-contractedness check")
    common(p)
    p.add_argument("curve")
    p.set_defaults(func=_cmd_curve_check)
    p = curve_sub.add_parser("length", help="polygonal length")
    common(p)
    p.add_argument("curve")
    p.set_defaults(func=_cmd_curve_length)
    p = curve_sub.add_parser("extract-sra", help="find an SRA subset in the curve image")
    common(p)
    p.add_argument("curve")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--target-size", type=int, required=True)
    p.set_defaults(func=_cmd_curve_extract)

    p = sub.add_parser("descend", help="gradient descent trajectory + self-contractedness")
    common(p)
    p.add_argument("--matrix", help="quadratic form, rows 'a,b;c,d'")
    p.add_argument("--objective", default="sqnorm", help="named objective when no matrix")
    p.add_argument("--start", required=True, help="start point 'x1,x2,...'")
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--iterations", type=int, required=True)
    p.add_argument("--norm", default="l2")
    p.set_defaults(func=_cmd_descend)

    p = sub.add_parser("quasiconvex", help="sample quasi-convexity along segments")
    common(p)
    p.add_argument("--objective", required=True, choices=sorted(curves.OBJECTIVES))
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--norm", default="l2")
    p.set_defaults(func=_cmd_quasiconvex)

    p = sub.add_parser("doubling", help="greedy-cover doubling estimate")
    common(p)
    p.add_argument("space")
    p.add_argument("--centers", required=True, help="comma-separated points")
    p.add_argument("--radii", required=True, help="comma-separated radii")
    p.set_defaults(func=_cmd_doubling)

    p = sub.add_parser("separated", help="maximum r-separated subset")
    common(p)
    p.add_argument("space")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--within", default=None)
    p.set_defaults(func=_cmd_separated)

    p = sub.add_parser("lrb", help="empirical linear-divergence constant on a graph")
    common(p)
    p.add_argument("graph")
    p.add_argument("--p", required=True)
    p.add_argument("--horizon", type=float, required=True)
    p.add_argument("--t-samples", type=int, default=64)
    p.set_defaults(func=_cmd_lrb)

    gen_parser = sub.add_parser("gen", help="generate benchmark spaces")
    gen_sub = gen_parser.add_subparsers(dest="subcommand", required=True)
    p = gen_sub.add_parser("laakso", help="Laakso graph (graph JSON; --sra-points for the subset space)")
    common(p)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--sra-points", type=int, default=None)
    p.add_argument("--space", action="store_true", help="emit the full space (small levels)")
    p.set_defaults(func=_cmd_gen_laakso)
    p = gen_sub.add_parser("broom", help="broom tree space")
    common(p)
    p.add_argument("--sequence", choices=("dyadic", "harmonic"), default="dyadic")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--heights", default=None, help="explicit 't1,t2,...' overrides --sequence")
    p.set_defaults(func=_cmd_gen_broom)
    p = gen_sub.add_parser("heisenberg", help="Heisenberg-axis samples")
    common(p)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--span", default="0,1")
    p.add_argument("--curve", action="store_true", help="emit curve JSON (any size)")
    p.set_defaults(func=_cmd_gen_heisenberg)
    p = gen_sub.add_parser("cayley", help="word-metric ball space")
    common(p)
    p.add_argument("--generators", required=True, help="'1,0;-1,0;0,1;0,-1'")
    p.add_argument("--radius", type=int, required=True)
    p.set_defaults(func=_cmd_gen_cayley)
    p = gen_sub.add_parser("sample", help="random points under a tagged norm")
    common(p)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--norm", default="l2")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=_cmd_gen_sample)

    p = sub.add_parser("stable-norm", help="stable norm estimate on an integer lattice")
    common(p)
    p.add_argument("--generators", required=True)
    p.add_argument("--g", required=True, help="element 'a,b'")
    p.add_argument("--k-max", type=int, required=True)
    p.set_defaults(func=_cmd_stable_norm)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    args._command_echo = list(argv) if argv is not None else sys.argv[1:]
    try:
        return args.func(args)
    except MetricGeoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
