"""Command-line interface.

Graphs are given as ``stock:<name>`` or ``file:<path>`` (JSON with ee, s0,
s1).  Coordinates are given inline as ``name=value,...`` (values may be
fractions) or as a comma-separated list in edge order, or as ``file:<path>``
holding {"weights": {...}, "orientations": {...}}.  A list starting with a
minus sign needs the ``--weights=-1,2,3`` form.

Exit codes: 0 success, 2 validation error, 3 tolerance failure.
"""

import argparse
import json
import math
import random
import sys
from fractions import Fraction

from . import fatgraph, fuchs, lamination, markov, pairing, poisson, quantum, teich
from .fatgraph import GraphError

EXIT_OK, EXIT_INVALID, EXIT_TOLERANCE = 0, 2, 3


class ToleranceFailure(Exception):
    pass


# -- output -----------------------------------------------------------------------------


def _dump(obj):
    """JSON with insertion-ordered keys and floats at 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return json.dumps(str(obj))
        text = format(obj, ".17g")
        return text if any(ch in text for ch in ".en") else text + ".0"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_dump(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_dump(v) for v in obj) + "]"
    if hasattr(obj, "tolist"):
        return _dump(obj.tolist())
    if hasattr(obj, "item"):
        return _dump(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit(payload, out=None):
    out = out or sys.stdout
    out.write(_dump({"format": 1, **payload}) + "\n")


# -- input parsing ------------------------------------------------------------------------


def load_graph(spec):
    if spec.startswith("stock:"):
        return fatgraph.stock(spec[len("stock:"):])
    if spec.startswith("file:"):
        with open(spec[len("file:"):]) as fh:
            data = json.load(fh)
        return fatgraph.FatGraph.from_json(data.get("graph", data))
    raise GraphError(f"graph must be stock:<name> or file:<path>, got {spec!r}")



def parse_weights(g, spec, exact=True):
    """Per-edge values from an inline spec or a file; unnamed edges default to 0."""
    orient = None
    if spec is None:
        vals = [0] * g.n_edges
        return [Fraction(v) if exact else float(v) for v in vals], orient
    if spec.startswith("file:"):
        with open(spec[len("file:"):]) as fh:
            data = json.load(fh)
        weights = data["weights"]
        if isinstance(weights, dict):
            items = list(weights.items())
        else:
            items = list(zip(g.edge_names, weights))
        if "orientations" in data:
            o = data["orientations"]
            orient = [int(o[str(f)]) if isinstance(o, dict) else int(o[f])
                      for f in range(g.n_faces)]
    elif "=" in spec:
        items = [tuple(part.split("=", 1)) for part in spec.split(",") if part.strip()]
    else:
        parts = [p for p in spec.split(",") if p.strip()]
        if len(parts) != g.n_edges:
            raise GraphError(f"expected {g.n_edges} values, got {len(parts)}")
        items = list(zip(g.edge_names, parts))
    vals = [Fraction(0)] * g.n_edges
    for name, v in items:
        vals[g.edge_index(name.strip())] = Fraction(str(v).strip())
    if not exact:
        vals = [float(v) for v in vals]
    return vals, orient


def parse_edge(g, s):
    try:
        return g.edge_index(int(s))
    except ValueError:
        return g.edge_index(s)


def _named(g, vals):
    return {name: v for name, v in zip(g.edge_names, vals)}


def _faces(vals):
    return {str(f): v for f, v in enumerate(vals)}


# -- graph ---------------------------------------------------------------------------------


def cmd_graph(args):
    g = load_graph(args.graph)
    if args.action == "info":
        genus, holes = fatgraph.surface_type(g)
        emit({"genus": genus, "holes": holes, "vertices": g.n_vertices,
              "edges": g.n_edges, "faces": g.n_faces, "trivalent": g.is_trivalent(),
              "regular": fatgraph.is_regular(g) if g.is_trivalent() else False,
              "edge_names": list(g.edge_names)})
    elif args.action == "flip":
        if args.edge is None:
            raise GraphError("--edge is required")
        h, corr = fatgraph.flip(g, parse_edge(g, args.edge))
        emit({"graph": h.to_json(), "correspondence": corr.by_name()})
    elif args.action == "dual":
        h, corr = fatgraph.dual(g)
        emit({"graph": h.to_json(), "vertices": h.n_vertices, "faces": h.n_faces})
    elif args.action == "cover":
        mono = {}
        for item in args.perm or []:
            name, perm = item.split("=", 1)
            mono[name] = [int(x) for x in perm.split(",")]
        cov = fatgraph.build_cover(g, mono, args.sheets)
        h = cov.graph
        info = {"graph": h.to_json(), "sheets": cov.n_sheets, "vertices": h.n_vertices,
                "edges": h.n_edges, "faces": h.n_faces,
                "components": len(fatgraph.components(h)),
                "edge_projection": [g.edge_names[k] for k in cov.edge_proj]}
        emit(info)
    elif args.action == "dot":
        sys.stdout.write(fatgraph.to_dot(g))
    return EXIT_OK


# -- laminations ---------------------------------------------------------------------------


def _curve_json(g, cur):
    out = {"kind": cur.kind, "weight": cur.weight}
    if cur.kind == "hole":
        out["face"] = cur.face
    else:
        out["path"] = [g.ee[i] for i in cur.ends]
    if cur.kind == "arc":
        out["spirals_into"] = list(cur.faces)
    return out


def cmd_lam(args):
    g = load_graph(args.graph)
    w, orient = parse_weights(g, args.weights)
    if args.action == "flip":
        k = parse_edge(g, args.edge)
        if args.unbounded:
            c, corr = lamination.flip_unbounded(lamination.UnboundedLamCoords(g, w, orient), k)
            emit({"graph": c.graph.to_json(), "weights": _named(c.graph, c.w),
                  "orientations": _faces(c.orientation), "correspondence": corr.by_name()})
        else:
            c, corr = lamination.flip_bounded(lamination.BoundedLamCoords(g, w), k)
            emit({"graph": c.graph.to_json(), "weights": _named(c.graph, c.w),
                  "correspondence": corr.by_name()})
    elif args.action == "reconstruct":
        if args.unbounded:
            s = lamination.reconstruct_unbounded(lamination.UnboundedLamCoords(g, w, orient))
        else:
            s = lamination.reconstruct_bounded_rational(lamination.BoundedLamCoords(g, w))
        emit({"components": len(s), "curves": [_curve_json(g, c) for c in s.curves]})
    elif args.action == "maps":
        b = lamination.BoundedLamCoords(g, w)
        u = lamination.UnboundedLamCoords(g, w, orient)
        emit({"a": _faces(lamination.map_a(b)), "lH": _faces(lamination.map_lH(u)),
              "lh": _faces(lamination.map_lh(u)),
              "ip": _named(g, lamination.map_ip(b).w)})
    elif args.action == "normalize":
        if args.positive:
            c, script = lamination.normalize_positive(
                lamination.UnboundedLamCoords(g, w, orient), args.max_steps)
            emit({"graph": c.graph.to_json(), "weights": _named(c.graph, c.w),
                  "orientations": _faces(c.orientation),
                  "script": [list(s) for s in script]})
        else:
            c, a, b = lamination.normalize_bounded(lamination.BoundedLamCoords(g, w))
            emit({"weights": _named(g, c.w), "scale": a, "shift": b})
    return EXIT_OK


# -- Teichmuller ------------------------------------------------------------------------------


def cmd_teich(args):
    g = load_graph(args.graph)
    w, _ = parse_weights(g, args.weights, exact=False)
    if args.action == "flip":
        k = parse_edge(g, args.edge)
        if args.penner:
            c, corr = teich.flip_penner(teich.PennerCoords(g, w), k)
            vals = c.u
        else:
            c, corr = teich.flip_shear(teich.ShearCoords(g, w), k)
            vals = c.z
        emit({"graph": c.graph.to_json(), "weights": _named(c.graph, vals),
              "correspondence": corr.by_name()})
    elif args.action == "orient":
        c = teich.orientation_flip_shear(teich.ShearCoords(g, w), int(args.face))
        emit({"weights": _named(g, c.z)})
    elif args.action == "ip":
        emit({"weights": _named(g, teich.ip_shear(teich.PennerCoords(g, w)).z)})
    elif args.action == "area":
        emit({"area": _faces(teich.area_map(teich.PennerCoords(g, w)))})
    elif args.action == "holes":
        c = teich.ShearCoords(g, w)
        emit({"lH": _faces(teich.lH_shear(c)), "lh": _faces(teich.lh_shear(c)),
              "orientations": _faces(c.orientations())})
    return EXIT_OK


def cmd_length(args):
    g = load_graph(args.graph)
    w, _ = parse_weights(g, args.weights, exact=False)
    path = [p.strip() for p in args.path.split(",") if p.strip()]
    m = fuchs.path_monodromy(g, w, path)
    tr = m.abs_trace()
    emit({"path": path, "trace": tr, "length": fuchs.geodesic_length(m) if tr >= 2 else None})
    return EXIT_OK


# -- pairings ---------------------------------------------------------------------------------


def cmd_pair(args):
    g = load_graph(args.graph)
    if args.action == "tl":
        z, _ = parse_weights(g, args.shear, exact=False)
        f, _ = parse_weights(g, args.lam)
        emit({"length": pairing.length_TL(teich.ShearCoords(g, z),
                                          lamination.BoundedLamCoords(g, f))})
    elif args.action == "lt":
        z, _ = parse_weights(g, args.lam)
        u, _ = parse_weights(g, args.penner, exact=False)
        emit({"length": pairing.length_LT(lamination.UnboundedLamCoords(g, z),
                                          teich.PennerCoords(g, u))})
    elif args.action == "ll":
        z, _ = parse_weights(g, args.unbounded)
        v, _ = parse_weights(g, args.bounded)
        val = pairing.intersection_LL(lamination.UnboundedLamCoords(g, z),
                                      lamination.BoundedLamCoords(g, v),
                                      allow_negative=args.allow_negative)
        emit({"intersection": val})
    elif args.action == "convexity":
        z, _ = parse_weights(g, args.shear, exact=False)
        f1, _ = parse_weights(g, args.f1)
        f2, _ = parse_weights(g, args.f2)
        rep = pairing.convexity_check(teich.ShearCoords(g, z), lamination.BoundedLamCoords(g, f1),
                                      lamination.BoundedLamCoords(g, f2))
        emit(rep)
        if rep["margin"] < -args.tol:
            raise ToleranceFailure(f"convexity margin {rep['margin']}")
    elif args.action == "asymptotic":
        grid = [float(c) for c in args.grid.split(",")]
        if args.kind == "TL":
            z, _ = parse_weights(g, args.shear, exact=False)
            f, _ = parse_weights(g, args.lam)
            rows = pairing.asymptotic_check("TL", teich.ShearCoords(g, z),
                                            lamination.BoundedLamCoords(g, f), grid)
        else:
            z, _ = parse_weights(g, args.lam)
            u, _ = parse_weights(g, args.penner, exact=False)
            rows = pairing.asymptotic_check("LT", lamination.UnboundedLamCoords(g, z),
                                            teich.PennerCoords(g, u), grid)
        emit({"rows": [{"C": r[0], "value": r[1], "limit": r[2], "error": r[3]} for r in rows],
              "shrinking": pairing.shrinks(rows)})
    return EXIT_OK


# -- Poisson ----------------------------------------------------------------------------------


def cmd_poisson(args):
    g = load_graph(args.graph)
    if args.action == "matrix":
        m = poisson.wp_form(g) if args.form else poisson.wp_bivector(g)
        emit({"edges": list(g.edge_names), "matrix": m})
    elif args.action == "casimir":
        defect = poisson.casimir_defect(g)
        emit({"faces": poisson.face_vectors(g), "defect": defect})
        if defect:
            raise ToleranceFailure("face sums are not central")
    elif args.action == "flipcheck":
        rng = random.Random(args.seed)
        edges = ([parse_edge(g, args.edge)] if args.edge is not None
                 else [k for k in range(g.n_edges) if not fatgraph.is_loop(g, k)])
        out = {}
        worst = 0.0
        for k in edges:
            pts = [[rng.uniform(-3, 3) for _ in range(g.n_edges)] for _ in range(args.samples)]
            dev = poisson.flip_invariance_check(g, k, pts)
            out[g.edge_names[k]] = dev
            worst = max(worst, dev)
        emit({"deviation": out, "max": worst, "tol": args.tol})
        if worst > args.tol:
            raise ToleranceFailure(f"flip deviation {worst}")
    return EXIT_OK


# -- quantum ----------------------------------------------------------------------------------


def _affine_json(fmap, names_in, names_out):
    rows = {}
    for i, row in enumerate(fmap.linear):
        terms = {names_in[j]: c for j, c in enumerate(row) if c}
        phis = [{"coef": t.coef, "scale": t.scale, "arg": names_in[t.gen], "hbar": t.hbar}
                for t in fmap.phis[i]]
        rows[names_out[i]] = {"linear": terms, "phi": phis}
    return rows


def cmd_quantum(args):
    if args.action == "phi":
        val = quantum.phi(args.x, args.hbar)
        emit({"x": args.x, "hbar": args.hbar, "phi": val,
              "classical": quantum.phi_classical(args.x)})
        return EXIT_OK
    g = load_graph(args.graph)
    p = quantum.presentation(g, args.hbar)
    if args.action == "presentation":
        emit({"hbar": p.hbar, "edges": list(g.edge_names), "eps": p.eps,
              "commutator_scale": 2 * math.pi * p.hbar, "centers": p.centers})
    elif args.action == "duality":
        d = quantum.duality_map(p)
        emit({"hbar": p.hbar, "dual_hbar": d.src.hbar,
              "map": _affine_json(d, list(g.edge_names), list(g.edge_names))})
    elif args.action == "flip":
        fm, corr = quantum.quantum_flip(p, parse_edge(g, args.edge))
        h = fm.dst.graph
        ok = all(quantum.centers_preserved(p, k) for k in [parse_edge(g, args.edge)])
        emit({"graph": h.to_json(), "map": _affine_json(fm, list(g.edge_names), list(h.edge_names)),
              "centers_preserved": ok})
    return EXIT_OK


# -- Markov -----------------------------------------------------------------------------------


def cmd_markov(args):
    if args.action == "tree":
        root = markov.markov_tree(args.depth)
        if args.format == "dot":
            sys.stdout.write(markov.tree_to_dot(root))
        else:
            emit({"depth": args.depth, "rows": markov.tree_rows(root), "tree": root.to_json()})
    elif args.action == "of":
        emit({"rational": args.value, "markov": markov.markov_of_rational(args.value)})
    elif args.action == "psi":
        emit({"rational": args.value, "psi": markov.psi(args.value)})
    elif args.action == "decorated":
        start = [Fraction(s) for s in args.start.split(",")]
        moves = [m for m in args.moves.split(",") if m] if args.moves else []
        orbit = markov.decorated_orbit(start, moves)
        emit({"orbit": [list(t) for t in orbit],
              "area": [markov.horocycle_area(t) for t in orbit]})
    return EXIT_OK


def cmd_selftest(args):
    from .selftest import run_selftest

    report = run_selftest(seed=args.seed, inject=args.inject)
    emit({"seed": args.seed, "items": report})
    return EXIT_OK if all(r["pass"] for r in report) else EXIT_TOLERANCE


# -- parser -----------------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="fatcoords", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph", help="graph combinatorics")
    p.add_argument("action", choices=["info", "flip", "dual", "cover", "dot"])
    p.add_argument("graph")
    p.add_argument("--edge")
    p.add_argument("--perm", action="append", help="edge=i0,i1,... sheet permutation")
    p.add_argument("--sheets", type=int)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("lam", help="measured laminations")
    p.add_argument("action", choices=["flip", "reconstruct", "maps", "normalize"])
    p.add_argument("graph")
    p.add_argument("--weights")
    p.add_argument("--edge")
    p.add_argument("--unbounded", action="store_true")
    p.add_argument("--positive", action="store_true")
    p.add_argument("--max-steps", type=int, default=6)
    p.set_defaults(func=cmd_lam)

    p = sub.add_parser("teich", help="shear and Penner coordinates")
    p.add_argument("action", choices=["flip", "orient", "ip", "area", "holes"])
    p.add_argument("graph")
    p.add_argument("--weights")
    p.add_argument("--edge")
    p.add_argument("--face", type=int)
    p.add_argument("--penner", action="store_true")
    p.set_defaults(func=cmd_teich)

    p = sub.add_parser("length", help="monodromy of a closed path")
    p.add_argument("action", choices=["curve"])
    p.add_argument("graph")
    p.add_argument("--weights")
    p.add_argument("--path", required=True, help="comma-separated arrival ends")
    p.set_defaults(func=cmd_length)

    p = sub.add_parser("pair", help="length and intersection pairings")
    p.add_argument("action", choices=["tl", "lt", "ll", "convexity", "asymptotic"])
    p.add_argument("graph")
    p.add_argument("--shear")
    p.add_argument("--penner")
    p.add_argument("--lam")
    p.add_argument("--unbounded")
    p.add_argument("--bounded")
    p.add_argument("--f1")
    p.add_argument("--f2")
    p.add_argument("--kind", choices=["TL", "LT"], default="TL")
    p.add_argument("--grid", default="4,8,16,32")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--allow-negative", action="store_true")
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("poisson", help="Weil-Petersson bivector")
    p.add_argument("action", choices=["matrix", "casimir", "flipcheck"])
    p.add_argument("graph")
    p.add_argument("--form", action="store_true")
    p.add_argument("--edge")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_poisson)

    p = sub.add_parser("quantum", help="phi and the quantum flip")
    p.add_argument("action", choices=["phi", "duality", "flip", "presentation"])
    p.add_argument("graph", nargs="?")
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--edge")
    p.set_defaults(func=cmd_quantum)

    p = sub.add_parser("markov", help="Markov numbers")
    p.add_argument("action", choices=["tree", "of", "psi", "decorated"])
    p.add_argument("value", nargs="?")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("--start", default="1,1,1")
    p.add_argument("--moves", default="flip")
    p.set_defaults(func=cmd_markov)

    p = sub.add_parser("selftest", help="run the invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject", choices=["casimir"], help="corrupt data to see a check fail")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "quantum" and args.action != "phi" and not args.graph:
        ap.error("this quantum action needs a graph")
    if args.command == "markov" and args.action in ("of", "psi") and args.value is None:
        ap.error("a rational p/q is required")
    try:
        return args.func(args)
    except ToleranceFailure as exc:
        print(f"tolerance failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except (GraphError, ValueError, KeyError, ZeroDivisionError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
