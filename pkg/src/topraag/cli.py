"""Command line front end: build complexes, run verification suites, compute
homology.  All I/O is JSON; exit code 0 on success, 1 on a property or regime
failure, 2 on a configuration error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys

from . import __version__
from .errors import ConfigError, RegimeMismatch, ToolkitError
from .graphs import cliques, graph_from_json
from .models import model_from_json
from .complexes import build_ball, cayley_abels_degree, export_ball
from .homology import homology_of_cells, valley_homology_report
from . import verification


def _config_hash(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _emit(report: dict, out_path):
    text = json.dumps(report, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_build(args) -> int:
    graph = graph_from_json(args.graph)
    model = model_from_json(args.model)
    ball = build_ball(
        model, graph, args.radius, vertex_cap=args.cap_vertices, cube_cap=args.cap_cubes
    )
    if args.out:
        export_ball(ball, args.out)
    counts = {}
    for c in ball.cubes:
        counts[c.dim] = counts.get(c.dim, 0) + 1
    summary = {
        "command": "build",
        "config_hash": _config_hash(
            {"graph": graph.to_json(), "model": model.to_json(), "radius": args.radius}
        ),
        "vertices": ball.n_vertices,
        "cube_counts": {str(d): n for d, n in sorted(counts.items())},
        "degree": cayley_abels_degree(model, graph),
        "dimension": cliques(graph).max_size(),
        "out": args.out,
    }
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def cmd_verify(args) -> int:
    graph = graph_from_json(args.graph) if args.graph else None
    model = model_from_json(args.model) if args.model else None
    rng = random.Random(args.seed)
    report = verification.run_suite(
        args.suite,
        model=model,
        graph=graph,
        radius=args.radius,
        n=args.n,
        rng=rng,
        latitude=args.latitude,
        window=args.window,
    )
    report["command"] = "verify"
    report["seed"] = args.seed
    _emit(report, args.out)
    return 0 if report["pass"] else 1


def cmd_homology(args) -> int:
    graph = graph_from_json(args.graph) if args.graph else None
    if args.valley is not None:
        if graph is None:
            raise ConfigError("--valley needs --graph")
        report = valley_homology_report(graph, args.valley, args.window)
        report["command"] = "homology"
        _emit(report, args.out)
        return 0
    model = model_from_json(args.model)
    ball = build_ball(
        model, graph, args.radius, vertex_cap=args.cap_vertices, cube_cap=args.cap_cubes
    )
    res = homology_of_cells(ball)
    report = {
        "command": "homology",
        "config_hash": _config_hash(
            {"graph": graph.to_json(), "model": model.to_json(), "radius": args.radius}
        ),
        "homology": res.to_json(),
    }
    _emit(report, args.out)
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="topraag",
        description="exact toolkit for Artin groups over base-group monomorphisms",
    )
    p.add_argument("--version", action="version", version=f"topraag {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, need_model=True):
        sp.add_argument("--graph", help="graph JSON file")
        if need_model:
            sp.add_argument("--model", help="model JSON file")
        sp.add_argument("--radius", type=int, default=2)
        sp.add_argument("--out", help="write the report/export here")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--cap-vertices", type=int, default=1_000_000)
        sp.add_argument("--cap-cubes", type=int, default=10_000_000)

    b = sub.add_parser("build", help="build a ball of the coset cube complex")
    common(b)
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="run a verification suite")
    common(v)
    v.add_argument(
        "--suite",
        required=True,
        choices=[
            "normal-form",
            "stabilisers",
            "intersections",
            "nerve",
            "links",
            "pockets",
            "valleys",
            "sb",
        ],
    )
    v.add_argument("--n", type=int, default=3, help="degree parameter for the sb suite")
    v.add_argument("--latitude", type=int, default=0)
    v.add_argument("--window", type=int, default=4)
    v.set_defaults(func=cmd_verify)

    h = sub.add_parser("homology", help="homology of a ball or a valley window")
    common(h)
    h.add_argument("--valley", type=int, help="latitude of a valley of the apartment")
    h.add_argument("--window", type=int, default=4, help="valley window word radius")
    h.set_defaults(func=cmd_homology)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError, KeyError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (RegimeMismatch, ToolkitError) as exc:
        hint = ""
        if isinstance(exc, RegimeMismatch) and "connected" in str(exc):
            hint = " (hint: the group splits over the connected components; build each separately)"
        print(f"error: {exc}{hint}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
