"""Command-line interface.

Every command writes a delimited or JSON report to stdout, or to ``--output``.
When ``--output`` is given for a command with geometric content, a PNG figure
is written next to it with the same stem.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import mpmath
from mpmath import mp

from . import algebraic as alg
from . import combinat, corpus, invariants, lorentz, table
from .errors import IneligibleCircuit, MutanthedronError, NoSideAssignment
from .pipeline import DEFAULT_CACHE, SOLVE_DIGITS, Pipeline

log = logging.getLogger("mutanthedron")

PRINT_DIGITS = 30


# ---------------------------------------------------------------------------
# input resolution


def load_polyhedron(source, mutant=False):
    """A polyhedron from a corpus name (``BB4m``) or a text file.

    ``mutant`` appends the mutant suffix to a corpus name that lacks it.
    """
    path = Path(source)
    if path.is_file():
        return path.stem, combinat.read_polyhedron(path)
    name = source
    if mutant and not name.endswith("m"):
        name += "m"
    return name, corpus.build(name)


def load_realization(source, digits, pipeline):
    """A realization from an archive file, a polyhedron file or a corpus name."""
    path = Path(source)
    if path.is_file() and path.suffix == ".json":
        r = lorentz.RealizedPolyhedron.from_archive(json.loads(path.read_text()))
        name = path.stem
        if digits and digits > r.digits:
            r = lorentz.refine(r, digits)
        return name, r
    name, poly = load_polyhedron(source)
    return name, pipeline.realization(name, poly, digits or SOLVE_DIGITS)


def parse_circuit(text, poly):
    """``a,b,c`` as face names or 0-based face indices."""
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != 3:
        raise MutanthedronError(f"--circuit needs three faces, got {text!r}")
    faces = tuple(poly.faces[int(s)] if s.isdigit() else s for s in parts)
    for f in faces:
        poly.index(f)
    for c in combinat.find_prismatic_3_circuits(poly):
        if set(c.faces) == set(faces):
            return c
    raise MutanthedronError(f"{','.join(faces)} is not a prismatic 3-circuit")


def choose_circuit(args, poly):
    if args.circuit:
        return parse_circuit(args.circuit, poly)
    found = [c for c in combinat.find_prismatic_3_circuits(poly) if c.eligible]
    if not found:
        raise IneligibleCircuit("no prismatic 3-circuit with equal angles")
    if len(found) > 1:
        listing = "; ".join(",".join(c.faces) for c in found)
        raise MutanthedronError(f"several eligible circuits, choose one with --circuit: {listing}")
    return found[0]


def side_assignment(args, poly, circuit):
    if not args.lower:
        return None
    lower = {s.strip() for s in args.lower.split(",")}
    unknown = lower - set(poly.faces)
    if unknown:
        raise NoSideAssignment(f"unknown faces in --lower: {sorted(unknown)}")
    return {f: ("lower" if f in lower else "upper") for f in poly.faces if f not in circuit.faces}


# ---------------------------------------------------------------------------
# formatting


def _num(x, digits=PRINT_DIGITS):
    """Decimal string; values below the working precision's noise floor print as 0."""
    if abs(x) < mpmath.mpf(10) ** (10 - mp.dps):
        return "0"
    return mpmath.nstr(x, digits, min_fixed=-digits, max_fixed=digits)


def _tsv(rows):
    return "\n".join("\t".join(str(c) for c in row) for row in rows) + "\n"


def _json(doc):
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def _normals_text(r, fmt):
    if fmt == "off":
        return lorentz.to_off(r)
    if fmt == "tsv":
        with mp.workdps(r.digits + 10):
            return _tsv([("face", "t", "x", "y", "z")] +
                        [(f, *(_num(x) for x in r.normal(f))) for f in r.poly.faces])
    return r.dumps() + "\n"


def _gram_text(r, fmt):
    G = lorentz.gram(r)
    faces = r.poly.faces
    with mp.workdps(r.digits + 10):
        cells = [[_num(G[i, j]) for j in range(len(faces))] for i in range(len(faces))]
    if fmt == "json":
        return _json({"faces": list(faces), "digits": r.digits, "gram": cells})
    return _tsv([("", *faces)] + [(f, *row) for f, row in zip(faces, cells)])


def _vertices_text(r, fmt):
    verts = lorentz.vertices(r)
    with mp.workdps(r.digits + 10):
        rows = [("/".join(t), *(_num(x) for x in p)) for t, p in verts]
    if fmt == "json":
        return _json({"digits": r.digits, "vertices": [{"faces": v[0].split("/"), "point": list(v[1:])}
                                                        for v in rows]})
    return _tsv([("faces", "t", "x", "y", "z")] + rows)


REPORT_COLUMNS = ("name", "itf_degree", "itf_poly", "root_re", "root_im", "integral_traces", "iqa", "arithmetic")


def _report_text(doc, fmt):
    if fmt != "tsv":
        return _json(doc)
    iqa = "" if doc["iqa"] is None else "({}, {})".format(*doc["iqa"]["symbol"])
    row = (doc["name"], doc["itf_degree"], doc["itf_poly_str"], doc["root"][0], doc["root"][1],
           str(doc["integral_traces"]).lower(), iqa, str(doc["arithmetic"]).lower())
    return _tsv([REPORT_COLUMNS, row])


def _table_text(results, fmt):
    rows = [r.row() for r in results]
    if fmt == "json":
        return _json({"rows": rows, "all_match": all(r.status == table.MATCH for r in results)})
    return _tsv([table.COLUMNS] + [tuple("" if row[c] is None else row[c] for c in table.COLUMNS) for row in rows])


# ---------------------------------------------------------------------------
# commands; each returns (text, figure callback or None, exit code)


def cmd_build(args, pipeline):
    name, poly = load_polyhedron(args.source, args.mutant)
    return poly.to_text(header=name), None, 0


def cmd_validate(args, pipeline):
    _, poly = load_polyhedron(args.source)
    diag = combinat.validate(poly)
    if args.format == "json":
        text = _json({"ok": diag.ok, "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in diag.checks]})
    elif args.format == "tsv":
        text = _tsv([("check", "ok", "detail")] + [(n, str(ok).lower(), d) for n, ok, d in diag.checks])
    else:
        text = str(diag) + "\n"
    return text, None, 0 if diag.ok else 1


def _klein_figure(r, title):
    from . import plots

    return lambda path: plots.klein_wireframe(r, path, title)


def cmd_realize(args, pipeline):
    name, r = load_realization(args.source, args.digits or SOLVE_DIGITS, pipeline)
    return _normals_text(r, args.format), _klein_figure(r, name), 0


def cmd_refine(args, pipeline):
    name, r = load_realization(args.source, None, pipeline)
    r = lorentz.refine(r, args.digits or 2 * r.digits)
    return _normals_text(r, args.format), _klein_figure(r, name), 0


def cmd_gram(args, pipeline):
    from . import plots

    name, r = load_realization(args.source, args.digits, pipeline)
    G = lorentz.gram(r)
    return _gram_text(r, args.format), (lambda path: plots.gram_heatmap(G, r.poly.faces, path, name)), 0


def cmd_vertices(args, pipeline):
    name, r = load_realization(args.source, args.digits, pipeline)
    return _vertices_text(r, args.format), _klein_figure(r, name), 0


def cmd_mutate(args, pipeline):
    if args.geometric:
        name, r = load_realization(args.source, args.digits, pipeline)
        c = choose_circuit(args, r.poly)
        m = lorentz.mutate_geometric(r, c)
        return _normals_text(m, args.format), _klein_figure(m, name + " mutated"), 0
    name, poly = load_polyhedron(args.source)
    c = choose_circuit(args, poly)
    if not c.eligible:
        raise IneligibleCircuit(f"circuit angles {c.angles} are not all equal")
    m = combinat.mutate_combinatorial(poly, c, side_assignment(args, poly, c))
    return m.to_text(header=f"{name} mutated along {','.join(c.faces)}"), None, 0


def cmd_invariants(args, pipeline):
    name, poly = load_polyhedron(args.source)
    digits = args.digits or alg.DEFAULT_DIGITS
    text = pipeline.report_text(name, poly, digits, args.maxlen)
    fmt = args.format if args.format in ("json", "tsv") else "json"
    figure = None
    if args.output:
        r = pipeline.realization(name, poly, 2 * digits + 20)
        figure = _klein_figure(r, name)
    return _report_text(json.loads(text), fmt), figure, 0


def cmd_table1(args, pipeline):
    from . import plots

    pairs = [p.strip() for p in args.pairs.split(",")] if args.pairs else None
    results = table.run_table(pipeline, args.digits or alg.DEFAULT_DIGITS, args.maxlen, pairs, args.jobs)
    fmt = args.format if args.format in ("json", "tsv") else "tsv"
    code = 0 if results and all(r.status == table.MATCH for r in results) else 1
    return _table_text(results, fmt), (lambda path: plots.table_summary(results, path)), code


def cmd_export(args, pipeline):
    if args.format == "off":
        name, r = load_realization(args.source, args.digits, pipeline)
        return lorentz.to_off(r), _klein_figure(r, name), 0
    args.format = "json"
    return cmd_invariants(args, pipeline)


COMMANDS = {
    "build": (cmd_build, "write the text polyhedron for a corpus name or file"),
    "validate": (cmd_validate, "check the necessary conditions for a compact realization"),
    "realize": (cmd_realize, "solve for face normals"),
    "refine": (cmd_refine, "Newton-refine a realization to more digits"),
    "gram": (cmd_gram, "Gram matrix of a realization"),
    "vertices": (cmd_vertices, "vertices of a realization on the hyperboloid"),
    "mutate": (cmd_mutate, "mutate along a prismatic 3-circuit"),
    "invariants": (cmd_invariants, "invariant trace field, integral traces, quaternion algebra"),
    "table1": (cmd_table1, "reproduce the mutant-pair table and compare it with the stored data"),
    "export": (cmd_export, "OFF mesh or JSON invariant report"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="mutanthedron", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        if name != "table1":
            p.add_argument("source", help="corpus name (e.g. AA5, BB4m), polyhedron file or realization archive")
        else:
            p.add_argument("--pairs", help="comma-separated subset of pairs")
            p.add_argument("--jobs", type=int, default=1, help="pairs computed in parallel processes")
        p.add_argument("--digits", type=int, default=None, help="working precision in decimal digits")
        p.add_argument("--maxlen", type=int, default=invariants.MAX_LEN, help="word-length cap for trace sampling")
        p.add_argument("--format", choices=("json", "tsv", "off"), default=None)
        p.add_argument("--output", "-o", type=Path, help="write here; figures go next to it as .png")
        p.add_argument("--no-figure", action="store_true", help="skip the figure when --output is given")
        p.add_argument("--cache-dir", default=DEFAULT_CACHE, help="result cache ('' disables caching)")
        if name == "build":
            p.add_argument("--mutant", action="store_true", help="build the mutant gluing")
        if name == "mutate":
            p.add_argument("--circuit", help="three faces a,b,c (names or 0-based indices)")
            p.add_argument("--lower", help="faces on the rotated side, for inputs without _top/_bot names")
            p.add_argument("--geometric", action="store_true", help="rotate a realization instead")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    if args.format is None:
        args.format = {"table1": "tsv", "validate": None, "export": "json"}.get(args.command, "json")
    pipeline = Pipeline(args.cache_dir or None)
    func = COMMANDS[args.command][0]
    try:
        text, figure, code = func(args, pipeline)
    except MutanthedronError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.output:
        args.output.parent.mkdir(parents=True, exist_ok=True)
        args.output.write_text(text)
        if figure is not None and not args.no_figure:
            figure(args.output.with_suffix(".png"))
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
