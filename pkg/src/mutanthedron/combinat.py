"""Pre-geometric polyhedra: faces, edges labelled by angle denominators, gluing.

An :class:`AngledPolyhedron` only knows which faces meet along an edge and
the dihedral angle ``pi/n`` there.  Vertices are not stored; for a simple
polyhedron the face-adjacency graph is a planar triangulation whose facial
triangles are exactly the vertices, and whose separating triangles are the
prismatic 3-circuits.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from typing import Iterable, Mapping

from .errors import (
    AngleOutOfRange,
    IneligibleCircuit,
    MismatchedQ,
    NoSideAssignment,
    PolyhedronParseError,
)

KINDS = ("A", "B", "C")


def _key(a, b):
    return frozenset((a, b))


@dataclass(frozen=True, eq=False)
class AngledPolyhedron:
    """Face/edge combinatorics with a dihedral angle ``pi/n`` on every edge.

    Parameters
    ----------
    faces : sequence of str
        Face identifiers.  Their order fixes the row order of normal and
        Gram matrices downstream.
    edges : mapping
        ``frozenset({f, g}) -> n`` for every pair of faces sharing an edge.
    """

    faces: tuple
    edges: Mapping = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "faces", tuple(self.faces))
        object.__setattr__(self, "edges", {frozenset(k): int(v) for k, v in dict(self.edges).items()})
        if len(set(self.faces)) != len(self.faces):
            raise PolyhedronParseError("duplicate face identifier")
        known = set(self.faces)
        for pair in self.edges:
            if len(pair) != 2 or not pair <= known:
                raise PolyhedronParseError(f"edge {sorted(pair)} references unknown or repeated faces")

    @classmethod
    def from_edges(cls, faces, edge_list):
        """Build from an iterable of ``(face, face, n)`` triples."""
        return cls(tuple(faces), {_key(a, b): n for a, b, n in edge_list})

    def __eq__(self, other):
        if not isinstance(other, AngledPolyhedron):
            return NotImplemented
        return self.faces == other.faces and self.edges == other.edges

    def __hash__(self):
        return hash((self.faces, frozenset(self.edges.items())))

    @property
    def n_faces(self):
        return len(self.faces)

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_vertices(self):
        return len(self.vertices)

    def index(self, face):
        return self.faces.index(face)

    def adjacent(self, a, b):
        return _key(a, b) in self.edges

    def angle(self, a, b):
        """Angle denominator ``n`` of the edge between ``a`` and ``b``."""
        return self.edges[_key(a, b)]

    @cached_property
    def neighbors(self):
        nb = {f: set() for f in self.faces}
        for pair in self.edges:
            a, b = tuple(pair)
            nb[a].add(b)
            nb[b].add(a)
        return {f: frozenset(s) for f, s in nb.items()}

    def edge_list(self):
        """Edges as ``(a, b, n)`` with ``a`` before ``b`` in face order."""
        order = {f: i for i, f in enumerate(self.faces)}
        out = []
        for pair, n in self.edges.items():
            a, b = sorted(pair, key=order.__getitem__)
            out.append((a, b, n))
        out.sort(key=lambda e: (order[e[0]], order[e[1]]))
        return out

    def _triangles(self):
        order = {f: i for i, f in enumerate(self.faces)}
        nb = self.neighbors
        for a in self.faces:
            for b in sorted(nb[a], key=order.__getitem__):
                if order[b] <= order[a]:
                    continue
                for c in sorted(nb[a] & nb[b], key=order.__getitem__):
                    if order[c] > order[b]:
                        yield (a, b, c)

    def _separates(self, tri):
        rest = [f for f in self.faces if f not in tri]
        if not rest:
            return False
        seen = {rest[0]}
        stack = [rest[0]]
        nb = self.neighbors
        while stack:
            f = stack.pop()
            for g in nb[f]:
                if g not in seen and g not in tri:
                    seen.add(g)
                    stack.append(g)
        return len(seen) != len(rest)

    @cached_property
    def vertices(self):
        """Face triples meeting at a vertex (non-separating triangles)."""
        return tuple(t for t in self._triangles() if not self._separates(t))

    @cached_property
    def separating_triangles(self):
        return tuple(t for t in self._triangles() if self._separates(t))

    def relabel(self, mapping, order=None):
        """Rename faces through ``mapping``; ``order`` optionally fixes the new face order."""
        faces = tuple(mapping.get(f, f) for f in self.faces)
        if order is not None:
            if sorted(order) != sorted(faces):
                raise ValueError("order must be a permutation of the relabelled faces")
            faces = tuple(order)
        edges = {_key(mapping.get(a, a), mapping.get(b, b)): n for (a, b, n) in self.edge_list()}
        return AngledPolyhedron(faces, edges)

    def angle_multiset(self):
        return sorted(self.edges.values())

    def to_text(self, header=None):
        lines = []
        if header:
            lines.extend(f"# {h}" for h in header.splitlines())
        lines.extend(f"face {f}" for f in self.faces)
        lines.extend(f"edge {a} {b} {n}" for a, b, n in self.edge_list())
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class HalfTemplate:
    """A half-polyhedron with a triangular interface face used for gluing.

    ``laterals[i]`` is the face across the i-th interface edge, listed in
    cyclic order.  ``symmetry`` is the face permutation of the template's
    reflection; it fixes ``interface`` and ``laterals[2]``.
    """

    kind: str
    q: int
    poly: AngledPolyhedron
    interface: str
    laterals: tuple
    symmetry: Mapping

    @property
    def cap_faces(self):
        skip = {self.interface, *self.laterals}
        return tuple(f for f in self.poly.faces if f not in skip)


@dataclass(frozen=True)
class PrismaticCircuit:
    faces: tuple
    angles: tuple

    @property
    def eligible(self):
        return len(set(self.angles)) == 1

    @property
    def q(self):
        return self.angles[0] if self.eligible else None


# ---------------------------------------------------------------------------
# text format


def _parse_lines(text, q=None):
    faces, edges, directives = [], [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        cmd = tok[0]
        if cmd == "face":
            if len(tok) != 2:
                raise PolyhedronParseError("expected 'face <id>'", lineno)
            faces.append(tok[1])
        elif cmd == "edge":
            if len(tok) != 4:
                raise PolyhedronParseError("expected 'edge <id1> <id2> <n>'", lineno)
            n = tok[3]
            if n == "q":
                if q is None:
                    raise PolyhedronParseError("symbolic angle 'q' outside a template", lineno)
                n = q
            else:
                try:
                    n = int(n)
                except ValueError:
                    raise PolyhedronParseError(f"angle denominator {n!r} is not an integer", lineno) from None
            if n < 2:
                raise PolyhedronParseError(f"angle denominator {n} < 2", lineno)
            if tok[1] not in faces or tok[2] not in faces:
                raise PolyhedronParseError("edge references an undeclared face", lineno)
            if tok[1] == tok[2]:
                raise PolyhedronParseError("edge joins a face to itself", lineno)
            if any(_key(a, b) == _key(tok[1], tok[2]) for a, b, _ in edges):
                raise PolyhedronParseError("duplicate edge", lineno)
            edges.append((tok[1], tok[2], n))
        elif cmd in ("interface", "lateral", "symmetry"):
            directives.setdefault(cmd, []).append((lineno, tok[1:]))
        else:
            raise PolyhedronParseError(f"unknown statement {cmd!r}", lineno)
    if not faces:
        raise PolyhedronParseError("no faces declared")
    return faces, edges, directives


def parse_polyhedron(text):
    """Parse the ``face``/``edge`` text format into an :class:`AngledPolyhedron`."""
    faces, edges, directives = _parse_lines(text)
    if directives:
        lineno = min(d[0][0] for d in directives.values())
        raise PolyhedronParseError("template directive in a polyhedron file", lineno)
    return AngledPolyhedron.from_edges(faces, edges)


def read_polyhedron(path):
    with open(path) as fh:
        return parse_polyhedron(fh.read())


def parse_template(text, kind, q):
    faces, edges, directives = _parse_lines(text, q=q)
    try:
        (_, (interface,)), = directives["interface"]
        (_, laterals), = directives["lateral"]
    except (KeyError, ValueError):
        raise PolyhedronParseError("template needs one 'interface <id>' and one 'lateral a b c'") from None
    if len(laterals) != 3:
        raise PolyhedronParseError("template needs exactly three lateral faces")
    sym = {}
    for lineno, pair in directives.get("symmetry", []):
        if len(pair) != 2:
            raise PolyhedronParseError("expected 'symmetry <id1> <id2>'", lineno)
        a, b = pair
        sym[a], sym[b] = b, a
    poly = AngledPolyhedron.from_edges(faces, edges)
    symmetry = {f: sym.get(f, f) for f in poly.faces}
    return HalfTemplate(kind, q, poly, interface, tuple(laterals), symmetry)


# ---------------------------------------------------------------------------
# templates and gluing


def admissible_q(kind, q):
    if kind not in KINDS:
        raise ValueError(f"unknown half-polyhedron kind {kind!r}")
    if kind in ("A", "B"):
        return q in (4, 5)
    return q >= 4


def build_half(kind, q):
    """Load the half-polyhedron template ``kind`` with lateral angles ``pi/q``."""
    if kind not in KINDS:
        raise ValueError(f"unknown half-polyhedron kind {kind!r}")
    if not admissible_q(kind, q):
        allowed = "q in {4, 5}" if kind in ("A", "B") else "q >= 4"
        raise AngleOutOfRange(f"half-polyhedron {kind} needs {allowed}, got q={q}")
    text = resources.files("mutanthedron").joinpath("templates", f"{kind}.poly").read_text()
    return parse_template(text, kind, q)


def glue(h1, h2, offset):
    """Glue two halves along their interface triangles.

    The face of ``h1`` across interface edge ``i`` merges with the face of
    ``h2`` across edge ``(i + offset) % 3``.  Offset 0 lines up both halves'
    symmetry planes; offsets 1 and 2 give the (mirror-congruent) mutant.
    Merged faces keep the name of the ``h1`` lateral; other faces get a
    ``_top`` (from ``h1``) or ``_bot`` (from ``h2``) suffix.
    """
    if h1.q != h2.q:
        raise MismatchedQ(f"cannot glue halves with q={h1.q} and q={h2.q}")
    offset %= 3
    rename1 = {f: f"{f}_top" for f in h1.cap_faces}
    rename1.update({lat: lat for lat in h1.laterals})
    rename2 = {f: f"{f}_bot" for f in h2.cap_faces}
    for i, lat in enumerate(h1.laterals):
        rename2[h2.laterals[(i + offset) % 3]] = lat

    faces = [rename1[f] for f in h1.cap_faces] + list(h1.laterals) + [rename2[f] for f in h2.cap_faces]
    edges = {}
    for h, ren in ((h1, rename1), (h2, rename2)):
        for a, b, n in h.poly.edge_list():
            if h.interface in (a, b):
                continue
            k = _key(ren[a], ren[b])
            prev = edges.get(k)
            if prev is not None and prev != n:
                raise MismatchedQ(f"merged edge {sorted(k)} has angles pi/{prev} and pi/{n}")
            edges[k] = n
    return AngledPolyhedron(tuple(faces), edges)


def template_sides(p):
    """Side assignment inherited from gluing: ``_top`` faces upper, ``_bot`` lower."""
    sides = {}
    for f in p.faces:
        if f.endswith("_top"):
            sides[f] = "upper"
        elif f.endswith("_bot"):
            sides[f] = "lower"
    return sides


# ---------------------------------------------------------------------------
# circuits and mutation


def find_prismatic_3_circuits(p):
    """All triples of mutually adjacent faces that do not share a vertex."""
    return [
        PrismaticCircuit(t, (p.angle(t[0], t[1]), p.angle(t[1], t[2]), p.angle(t[0], t[2])))
        for t in p.separating_triangles
    ]


def find_prismatic_4_circuits(p):
    """Chordless 4-cycles in the face-adjacency graph, each reported once."""
    order = {f: i for i, f in enumerate(p.faces)}
    nb = p.neighbors
    found = set()
    for a in p.faces:
        for b, d in itertools.combinations(sorted(nb[a], key=order.__getitem__), 2):
            if p.adjacent(b, d):
                continue
            for c in nb[b] & nb[d]:
                if c == a or p.adjacent(a, c):
                    continue
                cyc = (a, b, c, d)
                i = min(range(4), key=lambda k: order[cyc[k]])
                rot = cyc[i:] + cyc[:i]
                if order[rot[1]] > order[rot[3]]:
                    rot = (rot[0], rot[3], rot[2], rot[1])
                found.add(rot)
    return sorted(found, key=lambda c: [order[f] for f in c])


def _check_sides(p, circuit, side_assignment):
    cset = set(circuit.faces)
    if side_assignment is None:
        side_assignment = template_sides(p)
    sides = {f: side_assignment.get(f) for f in p.faces if f not in cset}
    if any(s not in ("upper", "lower") for s in sides.values()):
        raise NoSideAssignment("every non-circuit face needs an 'upper' or 'lower' side")
    if set(sides.values()) != {"upper", "lower"}:
        raise NoSideAssignment("both sides of the circuit must be nonempty")
    for a, b, _ in p.edge_list():
        if a in sides and b in sides and sides[a] != sides[b]:
            raise NoSideAssignment(f"faces {a} and {b} are adjacent across the circuit")
    return sides


def mutate_combinatorial(p, circuit, side_assignment=None):
    """Re-glue the lower side one step around the circuit.

    A lower face attached to ``circuit.faces[i]`` becomes attached to
    ``circuit.faces[i - 1]`` with the same angle, so that for template
    gluings ``mutate(glue(h1, h2, k)) == glue(h1, h2, k + 1)`` when the
    circuit is listed in lateral order.
    """
    if not circuit.eligible:
        raise IneligibleCircuit(f"circuit angles {circuit.angles} are not all equal")
    sides = _check_sides(p, circuit, side_assignment)
    c = list(circuit.faces)
    shift = {c[i]: c[i - 1] for i in range(3)}
    edges = {}
    for a, b, n in p.edge_list():
        if a in shift and sides.get(b) == "lower":
            a = shift[a]
        elif b in shift and sides.get(a) == "lower":
            b = shift[b]
        edges[_key(a, b)] = n
    return AngledPolyhedron(p.faces, edges)


# ---------------------------------------------------------------------------
# validation


@dataclass
class Diagnostics:
    checks: list = field(default_factory=list)

    def add(self, name, ok, detail=""):
        self.checks.append((name, bool(ok), detail))

    @property
    def ok(self):
        return all(ok for _, ok, _ in self.checks)

    @property
    def failures(self):
        return [(name, detail) for name, ok, detail in self.checks if not ok]

    def __str__(self):
        lines = [f"{'PASS' if ok else 'FAIL'}  {name}" + (f": {detail}" if detail else "") for name, ok, detail in self.checks]
        lines.append("overall: " + ("pass" if self.ok else "fail"))
        return "\n".join(lines)


def _inv_sum(ns):
    return sum(Fraction(1, n) for n in ns)


def validate(p):
    """Necessary conditions for a compact hyperbolic realization (Andreev)."""
    diag = Diagnostics()
    V, E, F = p.n_vertices, p.n_edges, p.n_faces
    bad_n = [(a, b, n) for a, b, n in p.edge_list() if n < 2]
    diag.add("angles", not bad_n, ", ".join(f"{a}-{b}: {n}" for a, b, n in bad_n))
    diag.add("euler", V - E + F == 2, f"V-E+F = {V}-{E}+{F} = {V - E + F}")
    # each edge lies on exactly two vertices in a simple polyhedron
    per_edge = {k: 0 for k in p.edges}
    for t in p.vertices:
        for a, b in itertools.combinations(t, 2):
            per_edge[_key(a, b)] += 1
    bad_edges = [sorted(k) for k, c in per_edge.items() if c != 2]
    diag.add("trivalent", 2 * E == 3 * V and not bad_edges,
             f"2E={2 * E}, 3V={3 * V}" + (f"; edges not on two vertices: {bad_edges}" if bad_edges else ""))

    bad_v = []
    for t in p.vertices:
        ns = [p.angle(a, b) for a, b in itertools.combinations(t, 2)]
        if _inv_sum(ns) <= 1:
            bad_v.append(f"{'/'.join(t)} angles pi/{ns}")
    diag.add("vertex angle sum > pi", not bad_v, "; ".join(bad_v))

    bad_c3 = []
    for c in find_prismatic_3_circuits(p):
        if _inv_sum(c.angles) >= 1:
            bad_c3.append(f"{'/'.join(c.faces)} angles pi/{list(c.angles)}")
    diag.add("prismatic 3-circuit sum < pi", not bad_c3, "; ".join(bad_c3))

    bad_c4 = []
    for cyc in find_prismatic_4_circuits(p):
        ns = [p.angle(cyc[i], cyc[(i + 1) % 4]) for i in range(4)]
        if _inv_sum(ns) >= 2:
            bad_c4.append(f"{'/'.join(cyc)} angles pi/{ns}")
    diag.add("prismatic 4-circuit sum < 2pi", not bad_c4, "; ".join(bad_c4))

    # triangular prism: the two triangular ends may not both be all right-angled
    if F == 5 and V == 6:
        tri = [f for f in p.faces if len(p.neighbors[f]) == 3]
        right = [f for f in tri if all(p.angle(f, g) == 2 for g in p.neighbors[f])]
        diag.add("prism ends not all right-angled", len(tri) == 2 and len(right) < 2,
                 f"right-angled ends: {right}" if right else "")
    return diag


def isomorphic(p1, p2):
    """Angle-preserving isomorphism of face-adjacency graphs (small inputs only)."""
    import networkx as nx
    from networkx.algorithms import isomorphism as iso

    def graph(p):
        g = nx.Graph()
        g.add_nodes_from(p.faces)
        g.add_edges_from((a, b, {"n": n}) for a, b, n in p.edge_list())
        return g

    return nx.is_isomorphic(graph(p1), graph(p2), edge_match=iso.numerical_edge_match("n", 0))
