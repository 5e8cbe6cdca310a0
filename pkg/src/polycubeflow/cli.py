"""Command-line front end producing deterministic JSON reports.

Subcommands
-----------
validate      build a manifest and report its combinatorial summary
trace         run a transverse-face orbit and summarise where it went
permutation   half-strip matching permutation of a product manifold
discrepancy   anchored-box equidistribution defect of an orbit
census        defective-chain census over a window of chain offsets
lemmas        small self-contained checks (three-distance, intervals, ...)
gallery       one-line report for every bundled example geometry

Exit codes: 0 success, 1 usage, 2 validation failure, 3 orbit hit a
singular edge, 4 numeric budget failure.  Reports embed the manifest
hash, the direction, the package version and any sampling seed, and are
byte-identical across runs with the same inputs.  Floats are printed
with 17 significant digits.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, gallery
from .arith import Direction, _q_pair, gap_spectrum_exact, special_interval
from .cf import NAMED_VALUES, ContinuedFraction, as_fraction
from .circle import IntervalUnion, fourier_parseval_check, shift_separation_measure
from .errors import (
    InsufficientSamples,
    NumericalStall,
    PolycubeError,
    PrecisionExhausted,
    SearchBudgetExceeded,
    SingularHit,
)
from .ergodic import (
    box_discrepancy,
    chain_avoiding_region,
    collect_y_orbit,
    defective_census,
    half_strip_chains,
    overlap_identity_check,
)
from .manifold import build_manifold, build_surface, check_street_wall_array
from .regions import FaceRect, RectangleUnionRegion
from .splitting import (
    cycle_structure,
    cycle_vertex_equivalence,
    render_cycle_string,
    splitting_permutation,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_SINGULAR = 3
EXIT_NUMERIC = 4

_NUMERIC_ERRORS = (NumericalStall, PrecisionExhausted, InsufficientSamples,
                   SearchBudgetExceeded)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on bad flags; we reserve 2 for validation."""

    def error(self, message):
        raise _UsageError(message)


# ------------------------------------------------------------ JSON output

def _format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"refusing to serialize {x!r} in a report")
    s = format(x, ".17g")
    if "." not in s and "e" not in s and "E" not in s:
        s += ".0"
    return s


def _render_json(obj, out: list[str], indent: int) -> None:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            out.append(f"{inner}{json.dumps(str(key))}: ")
            _render_json(value, out, indent + 1)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, value in enumerate(obj):
            out.append(inner)
            _render_json(value, out, indent + 1)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(pad + "]")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_format_float(float(obj)))
    elif isinstance(obj, Fraction):
        out.append(json.dumps(str(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif obj is None:
        out.append("null")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} in a report")


def render_report(doc: dict) -> str:
    out: list[str] = []
    _render_json(doc, out, 0)
    out.append("\n")
    return "".join(out)


def _emit(doc: dict, out_path: str | None) -> None:
    text = render_report(doc)
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------- input parsing

def parse_scalar(text: str):
    """A direction coordinate: named base, 'a0;a1,a2,(b1,b2)', p/q, or float."""
    t = text.strip()
    low = t.lower()
    if low in NAMED_VALUES:
        return NAMED_VALUES[low]
    if ";" in t:
        head, _, tail = t.partition(";")
        periodic: tuple[int, ...] = ()
        tail = tail.strip()
        if "(" in tail:
            lead, _, per = tail.partition("(")
            per = per.rstrip(") ")
            periodic = tuple(int(v) for v in per.split(",") if v.strip())
            tail = lead.rstrip(", ")
        quotients = tuple(int(v) for v in tail.split(",") if v.strip())
        return ContinuedFraction(int(head), quotients, periodic,
                                 exact_rational=not periodic)
    if "/" in t:
        return Fraction(t)
    return float(t)


def _direction(args) -> tuple[Direction, dict]:
    d = Direction(parse_scalar(args.alpha), parse_scalar(args.beta))
    doc = {
        "alpha": args.alpha,
        "beta": args.beta,
        "alpha_float": d.alpha_float,
        "beta_float": d.beta_float,
    }
    return d, doc


def _resolve_manifest(spec: str) -> tuple[dict, str, str]:
    """Accepts a gallery entry name or a path to a manifest JSON file."""
    path = Path(spec)
    if spec.endswith(".json") or "/" in spec:
        try:
            raw = path.read_text()
        except OSError as err:
            raise _UsageError(f"cannot read manifest {spec}: {err}") from err
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as err:
            raise ValueError(f"manifest {spec} is not valid JSON: {err}") from err
        source = str(path)
    else:
        try:
            doc = gallery.manifest(spec)
        except KeyError as err:
            raise _UsageError(err.args[0]) from err
        source = f"gallery:{spec}"
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return doc, source, hashlib.sha256(blob).hexdigest()


def _build_from_doc(doc: dict):
    """Returns (surface or None, manifold); surfaces are crossed with S^1."""
    kind = doc.get("kind")
    if kind == "surface":
        surface = build_surface(
            doc["squares"], walls=doc.get("walls", ()),
            gluing_overrides=doc.get("gluing_overrides", ()),
            name=doc.get("name", "surface"),
            diagram_labels=doc.get("diagram_labels"),
            notes=doc.get("notes", ""))
        return surface, surface.product_with_circle()
    if kind == "polycube":
        return None, build_manifold(
            doc["cubes"], walls=doc.get("walls", ()),
            gluing_overrides=doc.get("gluing_overrides", ()),
            name=doc.get("name", "manifold"),
            diagram_labels=doc.get("diagram_labels"),
            notes=doc.get("notes", ""))
    raise ValueError(f"manifest kind must be 'surface' or 'polycube', got {kind!r}")


def _load(args):
    doc, source, sha = _resolve_manifest(args.manifest)
    surface, m = _build_from_doc(doc)
    info = {"source": source, "name": m.name, "sha256": sha}
    return surface, m, info


def _envelope(command: str, manifest: dict | None = None,
              direction: dict | None = None, seed: int | None = None) -> dict:
    doc = {"tool": "polycubeflow", "version": __version__, "command": command}
    if manifest is not None:
        doc["manifest"] = manifest
    if direction is not None:
        doc["direction"] = direction
    if seed is not None:
        doc["seed"] = seed
    return doc


def _parse_start(text: str) -> tuple[int, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise _UsageError(f"--start wants 'cell,x,z', got {text!r}")
    cube = int(parts[0])
    x = float(as_fraction(parse_scalar(parts[1])))
    z = float(as_fraction(parse_scalar(parts[2])))
    return cube, x, z


def _is_product(m) -> bool:
    ident = np.arange(m.size)
    return bool(np.array_equal(m.hop[2, 0], ident)
                and np.array_equal(m.hop[2, 1], ident))


# ------------------------------------------------------------ subcommands

def _cmd_validate(args) -> dict:
    surface, m, info = _load(args)
    doc = _envelope("validate", manifest=info)
    doc["summary"] = m.summary()
    doc["is_product"] = _is_product(m)
    doc["singular_classes"] = [
        {"axis": c.axis, "quadrants": c.quadrant_count,
         "cone_angle_quarter_turns": c.quadrant_count,
         "edges": len(c.members)}
        for c in m.singular_edge_classes()
    ]
    if surface is not None:
        doc["vertex_classes"] = surface.count_vertex_classes()
    if args.street is not None:
        found, witness = check_street_wall_array(m, args.street)
        doc["street_wall_array"] = {
            "s": args.street, "found": found,
            "witness": witness if found else None,
        }
    return doc


def _cmd_trace(args) -> dict:
    _, m, info = _load(args)
    direction, dir_doc = _direction(args)
    cube, x, z = _parse_start(args.start)
    orbit = collect_y_orbit(m, cube, x, z, direction, args.steps)
    counts = np.bincount(orbit.faces, minlength=m.size)
    head = min(len(orbit), 24)
    doc = _envelope("trace", manifest=info, direction=dir_doc)
    doc["start"] = {"cell": cube, "x": x, "z": z}
    doc["steps"] = args.steps
    doc["final"] = {"cell": int(orbit.faces[-1]), "x": float(orbit.xs[-1]),
                    "z": float(orbit.zs[-1])}
    doc["face_counts"] = [int(c) for c in counts]
    doc["itinerary_head"] = [int(c) for c in orbit.faces[:head]]
    return doc


def _cmd_permutation(args) -> dict:
    _, m, info = _load(args)
    direction, dir_doc = _direction(args)
    sp = splitting_permutation(m, direction, k=args.k)
    cs = cycle_structure(sp)
    doc = _envelope("permutation", manifest=info, direction=dir_doc)
    doc["probe_level"] = args.k
    doc["labels"] = list(sp.labels)
    doc["mapping"] = {str(src): dst for src, dst in sorted(sp.perm.items())}
    doc["pairs"] = [list(p) for p in sp.pairs]
    doc["cycles"] = [list(c) for c in sp.cycles]
    doc["cycle_string"] = render_cycle_string(sp)
    doc["cycle_lengths"] = list(cs.lengths)
    doc["single_cycle"] = cs.is_single_cycle
    return doc


def _cmd_discrepancy(args) -> dict:
    _, m, info = _load(args)
    direction, dir_doc = _direction(args)
    cube, x, z = _parse_start(args.start)
    orbit = collect_y_orbit(m, cube, x, z, direction, args.steps)
    report = box_discrepancy(orbit, args.grid)
    doc = _envelope("discrepancy", manifest=info, direction=dir_doc)
    doc["start"] = {"cell": cube, "x": x, "z": z}
    doc.update(report.as_dict())
    if args.curve:
        points = sorted(int(v) for v in args.curve.split(","))
        doc["curve"] = [
            {"steps": n, "value": box_discrepancy(orbit.head(n), args.grid).value}
            for n in points
        ]
    return doc


def _census_region(spec: str, m, direction, k: int, h: int):
    t = spec.strip().lower()
    if t == "full":
        return RectangleUnionRegion.full(m.size)
    if t == "left-half":
        return RectangleUnionRegion.uniform(m.size, Fraction(0), Fraction(1, 2))
    if t == "avoid":
        return chain_avoiding_region(m, direction, k, h)
    if t.startswith("band:"):
        lo, _, hi = t[5:].partition(",")
        return RectangleUnionRegion.uniform(m.size, Fraction(lo), Fraction(hi))
    raise _UsageError(
        f"unknown region spec {spec!r}; want full, left-half, avoid or band:lo,hi")


def _cmd_census(args) -> dict:
    _, m, info = _load(args)
    direction, dir_doc = _direction(args)
    w1 = _census_region(args.w1, m, direction, args.k, args.h)
    surrogate = _census_region(args.surrogate, m, direction, args.k, args.h)
    report = defective_census(m, direction, w1, surrogate,
                              args.k, args.h, epsilon=args.epsilon)
    doc = _envelope("census", manifest=info, direction=dir_doc)
    doc["k"] = args.k
    doc["h"] = args.h
    doc["w1"] = args.w1
    doc["surrogate"] = args.surrogate
    doc.update(report.as_dict())
    if args.j_range:
        lo_s, _, hi_s = args.j_range.partition(":")
        lo, hi = int(lo_s), int(hi_s)
        window = [j for j in report.good_j if lo <= j <= hi]
        doc["good_j_window"] = {"lo": lo, "hi": hi, "count": len(window),
                                "values": window[:50]}
    return doc


def _lemma_three_distance(args, doc: dict) -> None:
    alpha = parse_scalar(args.alpha)
    q_k, q_k1 = _q_pair(alpha, args.k)
    spectrum = gap_spectrum_exact(alpha, args.k)
    doc["level"] = args.k
    doc["qs"] = [q_k, q_k1]
    doc["points"] = q_k1
    doc["spectrum"] = [
        {"length": float(length), "length_exact": str(length), "count": count}
        for length, count in spectrum
    ]


def _lemma_special_intervals(args, doc: dict) -> None:
    alpha = parse_scalar(args.alpha)
    q_k, q_k1 = _q_pair(alpha, args.k)
    intervals = [special_interval(alpha, args.k, i) for i in range(1, q_k1)]
    union = IntervalUnion.from_pairs(
        [(iv.lo % 1, iv.hi % 1) for iv in intervals])
    total = sum(iv.length for iv in intervals)
    doc["level"] = args.k
    doc["qs"] = [q_k, q_k1]
    doc["count"] = len(intervals)
    doc["half_width"] = float(intervals[0].length / 2)
    doc["total_length"] = float(total)
    doc["pairwise_disjoint"] = union.measure == total


def _lemma_half_strips(args, doc: dict) -> None:
    direction, dir_doc = _direction(args)
    report = half_strip_chains(direction, args.k, n_steps=args.steps)
    doc["direction"] = dir_doc
    doc.update(report.as_dict())


def _lemma_separation(args, doc: dict) -> None:
    arcs = IntervalUnion.from_pairs([(Fraction(0), Fraction(1, 2))])
    report = shift_separation_measure([arcs] * args.cells, args.samples)
    doc["cells"] = args.cells
    doc.update(report.as_dict())


def _lemma_parseval(args, doc: dict) -> None:
    rng = np.random.default_rng(args.seed)
    grid = 10 ** 6
    worst_gap = 0.0
    worst_tail = 0.0
    within = 0
    for _ in range(args.trials):
        cuts = np.sort(rng.choice(grid, size=12, replace=False))
        u_sigma = IntervalUnion.from_pairs(
            [(Fraction(int(cuts[2 * i]), grid), Fraction(int(cuts[2 * i + 1]), grid))
             for i in range(3)])
        u_one = IntervalUnion.from_pairs(
            [(Fraction(int(cuts[2 * i]), grid), Fraction(int(cuts[2 * i + 1]), grid))
             for i in range(3, 6)])
        shift = Fraction(int(rng.integers(grid)), grid)
        report = fourier_parseval_check(u_sigma, u_one, shift, n_max=args.n_max)
        gap = abs(report.lhs - report.rhs)
        worst_gap = max(worst_gap, gap)
        worst_tail = max(worst_tail, report.tail_bound)
        within += report.within
    doc["trials"] = args.trials
    doc["n_max"] = args.n_max
    doc["within"] = within
    doc["all_within"] = within == args.trials
    doc["max_gap"] = worst_gap
    doc["max_tail_bound"] = worst_tail


def _lemma_overlap(args, doc: dict) -> None:
    region = RectangleUnionRegion(1, (
        FaceRect(0, Fraction(1, 8), Fraction(3, 8), Fraction(1, 8), Fraction(5, 8)),
        FaceRect(0, Fraction(1, 2), Fraction(7, 8), Fraction(1, 2), Fraction(3, 4)),
    ))
    report = overlap_identity_check(region, resolution=args.resolution,
                                    seed=args.seed)
    doc["resolution"] = args.resolution
    doc["region_area"] = float(region.area)
    doc.update(report.as_dict())


_LEMMA_SUITES = {
    "three-distance": _lemma_three_distance,
    "special-intervals": _lemma_special_intervals,
    "half-strips": _lemma_half_strips,
    "separation": _lemma_separation,
    "parseval": _lemma_parseval,
    "overlap": _lemma_overlap,
}


def _cmd_lemmas(args) -> dict:
    seed = args.seed if args.suite in ("parseval", "overlap") else None
    doc = _envelope("lemmas", seed=seed)
    doc["suite"] = args.suite
    doc["alpha"] = args.alpha
    _LEMMA_SUITES[args.suite](args, doc)
    return doc


def _cmd_gallery(args) -> dict:
    direction, dir_doc = _direction(args)
    doc = _envelope("gallery", direction=dir_doc)
    entries = []
    for name in gallery.names():
        manifest = gallery.manifest(name)
        m = gallery.load_manifold(name)
        entry = {
            "name": name,
            "kind": manifest["kind"],
            "sha256": gallery.manifest_hash(name),
            "cells": m.size,
            "singular_quadrant_counts":
                sorted(c.quadrant_count for c in m.singular_edge_classes()),
        }
        if manifest["kind"] == "surface":
            surface = gallery.load_surface(name)
            sp = splitting_permutation(m, direction)
            entry["vertex_classes"] = surface.count_vertex_classes()
            entry["cycles"] = [list(c) for c in sp.cycles]
            entry["cycle_string"] = render_cycle_string(sp)
            entry["criterion_equivalent"] = \
                cycle_vertex_equivalence(surface, direction).equivalent
        entries.append(entry)
    doc["entries"] = entries
    return doc


# ----------------------------------------------------------------- parser

def _add_direction_flags(sub) -> None:
    sub.add_argument("--alpha", default="golden",
                     help="x-slope: named base, CF 'a0;a1,(b1)', p/q, or float")
    sub.add_argument("--beta", default="sqrt2",
                     help="z-slope, same formats as --alpha")


def build_parser() -> _Parser:
    parser = _Parser(prog="polycubeflow",
                     description="geodesic-flow reports for glued cube complexes")
    parser.add_argument("--version", action="version",
                        version=f"polycubeflow {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("validate", help="build a manifest and summarise it")
    p.add_argument("--manifest", required=True)
    p.add_argument("--street", type=int, default=None,
                   help="also scan for an s-cell street-wall-array split")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_validate)

    p = subs.add_parser("trace", help="run a transverse-face orbit")
    p.add_argument("--manifest", required=True)
    _add_direction_flags(p)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--start", default="0,1/7,1/11", help="cell,x,z")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_trace)

    p = subs.add_parser("permutation", help="half-strip matching permutation")
    p.add_argument("--manifest", required=True)
    _add_direction_flags(p)
    p.add_argument("--k", type=int, default=3, help="probe interval level")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_permutation)

    p = subs.add_parser("discrepancy", help="anchored-box orbit discrepancy")
    p.add_argument("--manifest", required=True)
    _add_direction_flags(p)
    p.add_argument("--steps", type=int, default=100000)
    p.add_argument("--grid", type=int, default=8)
    p.add_argument("--start", default="0,1/7,1/11", help="cell,x,z")
    p.add_argument("--curve", default=None,
                   help="comma list of prefix lengths to evaluate as well")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_discrepancy)

    p = subs.add_parser("census", help="defective-chain census")
    p.add_argument("--manifest", required=True)
    _add_direction_flags(p)
    p.add_argument("--k", type=int, default=2, help="alpha denominator level")
    p.add_argument("--h", type=int, default=6, help="beta denominator level")
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--w1", default="band:1/100,51/100",
                   help="full | left-half | avoid | band:lo,hi")
    p.add_argument("--surrogate", default="left-half",
                   help="same choices as --w1")
    p.add_argument("--j-range", default=None, help="lo:hi report window")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_census)

    p = subs.add_parser("lemmas", help="self-contained arithmetic checks")
    p.add_argument("--suite", required=True, choices=sorted(_LEMMA_SUITES))
    _add_direction_flags(p)
    p.add_argument("--k", type=int, default=2, help="expansion level")
    p.add_argument("--steps", type=int, default=None,
                   help="half-strips: return-time budget")
    p.add_argument("--cells", type=int, default=1, help="separation: cell count")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--trials", type=int, default=20, help="parseval trials")
    p.add_argument("--n-max", type=int, default=2048, help="parseval mode cutoff")
    p.add_argument("--resolution", type=int, default=64, help="overlap grid")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_lemmas)

    p = subs.add_parser("gallery", help="report every bundled example")
    _add_direction_flags(p)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_gallery)

    return parser


def _fail(command: str, err: Exception, code: int) -> int:
    doc = _envelope(command)
    doc["error"] = {"type": type(err).__name__, "message": str(err)}
    sys.stdout.write(render_report(doc))
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as err:
        return EXIT_OK if err.code in (None, 0) else EXIT_USAGE
    command = args.command
    try:
        doc = args.handler(args)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except SingularHit as err:
        return _fail(command, err, EXIT_SINGULAR)
    except _NUMERIC_ERRORS as err:
        return _fail(command, err, EXIT_NUMERIC)
    except (PolycubeError, ValueError, KeyError) as err:
        return _fail(command, err, EXIT_VALIDATION)
    _emit(doc, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
