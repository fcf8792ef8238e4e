"""Polyhedra in the hyperboloid model of H^3, coordinates ``(t, x, y, z)``.

A face is stored as a unit spacelike normal ``v`` with
``<v, v> = -v_t^2 + v_x^2 + v_y^2 + v_z^2 = 1``.  The sign convention is the
one of the worked AA5 example: on the future sheet the polyhedron is
``{p : <p, v_i> >= 0 for all i}`` while the spatial parts of the ``v_i``
point away from it.  For an edge with angle ``pi/n`` the two normals
satisfy ``<v_i, v_j> = -cos(pi/n)``.

Realization runs in two stages: a float64 least-squares solve from a
spherical spring-embedding seed, then Newton's method in mpmath on the
square system left after fixing the gauge.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field, replace

import mpmath
import numpy as np
from mpmath import mp
from scipy.optimize import least_squares

from . import combinat
from .errors import (
    CombinatoricsMismatch,
    DegenerateBasis,
    NoConvergence,
    NonCompact,
    NotPerpendicularizable,
    NotRealizable,
    StraddlingFace,
)

SOLVER_SEED = 0xC0FE7E2
MAX_RESTARTS = 64
SIGN = (-1, 1, 1, 1)


def minkowski_inner(u, v):
    """``-u_t v_t + u_x v_x + u_y v_y + u_z v_z``."""
    return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]


def _cross4(a, b, c):
    """Euclidean vector orthogonal to ``a``, ``b``, ``c`` in R^4 (cofactor expansion)."""
    rows = (a, b, c)
    out = []
    for k in range(4):
        cols = [j for j in range(4) if j != k]
        m = [[r[j] for j in cols] for r in rows]
        det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
               - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
               + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
        out.append(det if k % 2 == 0 else -det)
    return out


def _jflip(v):
    return [-v[0], v[1], v[2], v[3]]


def lorentz_orthogonal(a, b, c):
    """A vector ``p`` with ``<p, a> = <p, b> = <p, c> = 0``."""
    return _cross4(_jflip(a), _jflip(b), _jflip(c))


@dataclass(frozen=True, eq=False)
class RealizedPolyhedron:
    """Unit face normals of a compact polyhedron, one row per face.

    ``gauge`` names the three faces used to fix the isometry: the first has
    normal ``(0, 0, 0, 1)``, the second has ``t = x = 0, y < 0`` and the
    third has ``t = 0, x < 0``.
    """

    poly: combinat.AngledPolyhedron
    normals: tuple
    digits: int
    gauge: tuple
    residual: object = None
    seed: int = SOLVER_SEED
    restart: int = 0
    history: tuple = field(default=(), repr=False)

    def normal(self, face):
        return self.normals[self.poly.index(face)]

    def residuals(self):
        return _residual_vector(self.poly, self.normals)

    def to_archive(self):
        """JSON-ready dict; normals are decimal strings at full precision."""
        with mp.workdps(self.digits + 10):
            normals = [[mpmath.nstr(x, self.digits + 5, min_fixed=-1, max_fixed=-1, strip_zeros=False) if x else "0"
                        for x in row] for row in self.normals]
            residual = mpmath.nstr(self.residual, 5) if self.residual is not None else None
        return {
            "combinatorics": self.poly.to_text(),
            "digits": self.digits,
            "normals": normals,
            "residual": residual,
            "gauge": list(self.gauge),
            "seed": self.seed,
            "restart": self.restart,
        }

    @classmethod
    def from_archive(cls, doc):
        poly = combinat.parse_polyhedron(doc["combinatorics"])
        digits = int(doc["digits"])
        with mp.workdps(digits + 10):
            normals = tuple(tuple(mpmath.mpf(x) for x in row) for row in doc["normals"])
            residual = mpmath.mpf(doc["residual"]) if doc.get("residual") else None
        return cls(poly, normals, digits, tuple(doc["gauge"]), residual, doc.get("seed", SOLVER_SEED), doc.get("restart", 0))

    def dumps(self):
        return json.dumps(self.to_archive(), indent=1)


# ---------------------------------------------------------------------------
# residual equations


def _residual_vector(poly, normals):
    out = []
    idx = {f: i for i, f in enumerate(poly.faces)}
    for v in normals:
        out.append(minkowski_inner(v, v) - 1)
    for a, b, n in poly.edge_list():
        out.append(minkowski_inner(normals[idx[a]], normals[idx[b]]) + mpmath.cos(mpmath.pi / n))
    return out


def _max_abs(xs):
    return max(abs(x) for x in xs) if xs else mpmath.mpf(0)


# ---------------------------------------------------------------------------
# float stage


def _spring_seed(poly, rng):
    """Unit directions for the face normals from a spring embedding on S^2."""
    F = poly.n_faces
    u = rng.normal(size=(F, 3))
    u /= np.linalg.norm(u, axis=1)[:, None]
    idx = {f: i for i, f in enumerate(poly.faces)}
    adj = np.zeros((F, F), dtype=bool)
    for a, b, _ in poly.edge_list():
        adj[idx[a], idx[b]] = adj[idx[b], idx[a]] = True
    for step in range(400):
        diff = u[:, None, :] - u[None, :, :]
        dist = np.linalg.norm(diff, axis=2) + np.eye(F)
        rep = (diff / dist[..., None] ** 3).sum(axis=1)
        att = -(diff * adj[..., None]).sum(axis=1)
        u = u + 0.05 * (rep + 0.5 * att)
        u /= np.linalg.norm(u, axis=1)[:, None]
    return u


def _float_residual(x, poly, pairs, targets, nonadj):
    V = x.reshape(-1, 4)
    JV = V * np.array(SIGN, dtype=float)
    G = JV @ V.T
    res = [np.diag(G) - 1.0]
    res.append(G[pairs[:, 0], pairs[:, 1]] - targets)
    if len(nonadj):
        # disjoint planes need <v_i, v_j> <= -1
        res.append(np.maximum(0.0, G[nonadj[:, 0], nonadj[:, 1]] + 1.05))
    return np.concatenate(res)


def _float_solve(poly, rng, scale):
    idx = {f: i for i, f in enumerate(poly.faces)}
    el = poly.edge_list()
    pairs = np.array([(idx[a], idx[b]) for a, b, _ in el])
    targets = np.array([-math.cos(math.pi / n) for _, _, n in el])
    nonadj = np.array([(i, j) for i, j in itertools.combinations(range(poly.n_faces), 2)
                       if not poly.adjacent(poly.faces[i], poly.faces[j])]).reshape(-1, 2)
    u = _spring_seed(poly, rng)
    V0 = np.hstack([-math.sinh(scale) * np.ones((poly.n_faces, 1)), math.cosh(scale) * u])
    sol = least_squares(_float_residual, V0.ravel(), args=(poly, pairs, targets, nonadj),
                        method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=4000)
    return sol.x.reshape(-1, 4), float(np.max(np.abs(sol.fun)))


# ---------------------------------------------------------------------------
# gauge


def default_gauge(poly):
    """First vertex (in face order) used to fix the isometry."""
    if not poly.vertices:
        raise NotRealizable("polyhedron has no vertices")
    order = {f: i for i, f in enumerate(poly.faces)}
    return min(poly.vertices, key=lambda t: [order[f] for f in t])


def canonical_gauge(normals, idx):
    """Apply the isometry putting faces ``idx`` into the canonical position.

    The common vertex of the three faces goes to ``(1, 0, 0, 0)``; then
    ``v_a = e_z``, ``v_b`` lies in the ``yz``-plane with ``y < 0`` and
    ``v_c`` has ``x < 0``.  Works at the ambient mpmath precision.
    """
    ia, ib, ic = idx
    N = [list(map(mpmath.mpf, v)) for v in normals]
    p = lorentz_orthogonal(N[ia], N[ib], N[ic])
    q = minkowski_inner(p, p)
    if q >= 0:
        raise NonCompact("gauge faces do not meet at a finite vertex")
    p = [x / mpmath.sqrt(-q) for x in p]
    if p[0] < 0:
        p = [-x for x in p]
    pt, ps = p[0], p[1:]
    # boost sending p to e_t
    B = mpmath.matrix(4, 4)
    B[0, 0] = pt
    for i in range(3):
        B[0, i + 1] = -ps[i]
        B[i + 1, 0] = -ps[i]
        for j in range(3):
            B[i + 1, j + 1] = (1 if i == j else 0) + ps[i] * ps[j] / (1 + pt)
    M = [list(B * mpmath.matrix(v)) for v in N]
    a = mpmath.matrix(M[ia][1:])
    a = a / mpmath.norm(a)
    b = mpmath.matrix(M[ib][1:])
    b = b - (b.T * a)[0] * a
    b = b / mpmath.norm(b)
    ez, ey = a, -b
    ex = mpmath.matrix([ey[1] * ez[2] - ey[2] * ez[1], ey[2] * ez[0] - ey[0] * ez[2], ey[0] * ez[1] - ey[1] * ez[0]])
    c = mpmath.matrix(M[ic][1:])
    if (c.T * ex)[0] > 0:
        ex = -ex
    out = []
    for v in M:
        s = mpmath.matrix(v[1:])
        out.append((v[0], (ex.T * s)[0], (ey.T * s)[0], (ez.T * s)[0]))
    # exact zeros forced by the gauge
    out[ia] = (mpmath.mpf(0), mpmath.mpf(0), mpmath.mpf(0), mpmath.mpf(1))
    out[ib] = (mpmath.mpf(0), mpmath.mpf(0), out[ib][2], out[ib][3])
    out[ic] = (mpmath.mpf(0), out[ic][1], out[ic][2], out[ic][3])
    return tuple(out)


# ---------------------------------------------------------------------------
# Newton stage


def _unknown_slots(F, idx):
    ia, ib, ic = idx
    slots = []
    for i in range(F):
        if i == ia:
            continue
        comps = (2, 3) if i == ib else (1, 2, 3) if i == ic else (0, 1, 2, 3)
        slots.extend((i, k) for k in comps)
    return slots


def _newton(poly, normals, idx, digits, maxiter=60, history=None):
    """Newton's method on the gauge-fixed square system, ramping precision."""
    F = poly.n_faces
    fidx = {f: i for i, f in enumerate(poly.faces)}
    edges = [(fidx[a], fidx[b], n) for a, b, n in poly.edge_list()]
    slots = _unknown_slots(F, idx)
    col = {s: j for j, s in enumerate(slots)}
    target = mpmath.mpf(10) ** (-(digits + 5))
    V = [list(v) for v in normals]
    prec = 30
    for it in range(maxiter):
        with mp.workdps(prec + 20):
            V = [[mpmath.mpf(x) for x in v] for v in V]
            cos = {n: mpmath.cos(mpmath.pi / n) for _, _, n in edges}
            rows, rhs = [], []
            for i in range(F):
                if i == idx[0]:
                    continue
                r = [0] * len(slots)
                for k in range(4):
                    if (i, k) in col:
                        r[col[(i, k)]] = 2 * SIGN[k] * V[i][k]
                rows.append(r)
                rhs.append(minkowski_inner(V[i], V[i]) - 1)
            for i, j, n in edges:
                r = [0] * len(slots)
                for k in range(4):
                    if (i, k) in col:
                        r[col[(i, k)]] += SIGN[k] * V[j][k]
                    if (j, k) in col:
                        r[col[(j, k)]] += SIGN[k] * V[i][k]
                rows.append(r)
                rhs.append(minkowski_inner(V[i], V[j]) + cos[n])
            res = _max_abs(rhs)
            if history is not None:
                history.append(res)
            if prec >= digits + 10 and res < target:
                break
            try:
                step = mpmath.lu_solve(mpmath.matrix(rows), mpmath.matrix(rhs))
            except ZeroDivisionError:
                raise NoConvergence("singular Jacobian") from None
            for j, (i, k) in enumerate(slots):
                V[i][k] -= step[j]
        if res < mpmath.mpf(10) ** (-prec // 2):
            prec = min(2 * prec, digits + 10)
    else:
        raise NoConvergence(f"Newton did not reach 1e-{digits + 5} (residual {mpmath.nstr(res, 5)})")
    with mp.workdps(digits + 10):
        return tuple(tuple(+x for x in v) for v in V), +res


# ---------------------------------------------------------------------------
# combinatorics of a realization


def derived_vertices(normals, tol=None):
    """Face-index triples whose planes meet at a point of the polyhedron."""
    F = len(normals)
    if tol is None:
        tol = mpmath.mpf(10) ** (-(mp.dps // 2))
    out = []
    for t in itertools.combinations(range(F), 3):
        p = lorentz_orthogonal(*(normals[i] for i in t))
        q = minkowski_inner(p, p)
        if q >= -tol:
            continue
        p = [x / mpmath.sqrt(-q) for x in p]
        if p[0] < 0:
            p = [-x for x in p]
        if all(minkowski_inner(p, normals[k]) > -tol for k in range(F) if k not in t):
            out.append(t)
    return out


def _check_combinatorics(poly, normals):
    want = sorted(tuple(sorted(poly.index(f) for f in t)) for t in poly.vertices)
    got = sorted(derived_vertices(normals))
    if want != got:
        raise CombinatoricsMismatch(f"realization has vertices {got}, expected {want}")
    idx = {f: i for i, f in enumerate(poly.faces)}
    for a, b in itertools.combinations(poly.faces, 2):
        ip = minkowski_inner(normals[idx[a]], normals[idx[b]])
        if not poly.adjacent(a, b) and ip > -1:
            raise CombinatoricsMismatch(f"faces {a} and {b} intersect but should be disjoint")


def _float_matches(poly, V):
    with mp.workdps(20):
        try:
            _check_combinatorics(poly, [[mpmath.mpf(float(x)) for x in v] for v in V])
        except CombinatoricsMismatch:
            return False
    return True


def realize(p, digits=50, seed=SOLVER_SEED, max_restarts=MAX_RESTARTS, gauge=None):
    """Solve for unit normals realizing ``p`` with its dihedral angles.

    Raises
    ------
    NotRealizable
        If ``p`` fails the Andreev diagnostics or no restart converges.
    CombinatoricsMismatch
        If the only converged solutions realize a different polyhedron.
    """
    diag = combinat.validate(p)
    if not diag.ok:
        raise NotRealizable("; ".join(f"{n}: {d}" for n, d in diag.failures))
    gauge = tuple(gauge or default_gauge(p))
    idx = tuple(p.index(f) for f in gauge)
    mismatch = False
    for restart in range(max_restarts):
        rng = np.random.default_rng([seed, restart])
        scale = (0.5, 0.9, 1.3, 1.8)[restart % 4]
        V, err = _float_solve(p, rng, scale)
        if err > 1e-9:
            continue
        if not _float_matches(p, V):
            mismatch = True
            continue
        with mp.workdps(30):
            N = canonical_gauge([[mpmath.mpf(float(x)) for x in v] for v in V], idx)
        hist = []
        try:
            normals, res = _newton(p, N, idx, digits, history=hist)
        except NoConvergence:
            continue
        with mp.workdps(digits + 10):
            normals = canonical_gauge(normals, idx)
            try:
                _check_combinatorics(p, normals)
            except CombinatoricsMismatch:
                mismatch = True
                continue
        return RealizedPolyhedron(p, normals, digits, gauge, res, seed, restart, tuple(hist))
    if mismatch:
        raise CombinatoricsMismatch("solutions found, but none with the requested combinatorics")
    raise NotRealizable(f"no convergent solution in {max_restarts} restarts")


def refine(r, digits):
    """Newton-refine a realization to ``digits`` digits, keeping its gauge."""
    idx = tuple(r.poly.index(f) for f in r.gauge)
    hist = []
    normals, res = _newton(r.poly, r.normals, idx, digits, history=hist)
    with mp.workdps(digits + 10):
        normals = canonical_gauge(normals, idx)
        _check_combinatorics(r.poly, normals)
    return replace(r, normals=normals, digits=digits, residual=res, history=tuple(hist))


def with_normals(r, normals, poly=None):
    return replace(r, normals=tuple(tuple(v) for v in normals), poly=poly or r.poly)


# ---------------------------------------------------------------------------
# derived geometry


def gram(r):
    """``G_ij = 2 <v_i, v_j>`` as an mpmath matrix."""
    F = len(r.normals)
    with mp.workdps(r.digits + 10):
        G = mpmath.matrix(F, F)
        for i in range(F):
            G[i, i] = 2 * minkowski_inner(r.normals[i], r.normals[i])
            for j in range(i + 1, F):
                G[i, j] = G[j, i] = 2 * minkowski_inner(r.normals[i], r.normals[j])
    return G


def vertices(r):
    """``[(face triple, p)]`` with ``<p, p> = -1`` and ``p_t > 0`` for each vertex.

    Raises
    ------
    NonCompact
        If some vertex is not a timelike point.
    """
    out = []
    with mp.workdps(r.digits + 10):
        for t in r.poly.vertices:
            p = lorentz_orthogonal(*(r.normal(f) for f in t))
            q = minkowski_inner(p, p)
            if q >= 0:
                raise NonCompact(f"vertex {t} is ideal or hyperideal")
            p = [x / mpmath.sqrt(-q) for x in p]
            if p[0] < 0:
                p = [-x for x in p]
            out.append((t, tuple(p)))
    return out


@dataclass(frozen=True)
class CuttingPlane:
    normal: tuple
    circuit: combinat.PrismaticCircuit


def _upper_reference(r, circuit):
    cset = set(circuit.faces)
    for f in r.poly.faces:
        if f not in cset:
            return f
    raise NotPerpendicularizable("no face outside the circuit")


def cutting_plane(r, circuit):
    """Unit normal of the plane perpendicular to the three circuit faces.

    The sign makes ``<p, n> < 0`` at the vertices of the first non-circuit
    face, which is taken to lie on the upper side.
    """
    with mp.workdps(r.digits + 10):
        v = [r.normal(f) for f in circuit.faces]
        n = lorentz_orthogonal(*v)
        q = minkowski_inner(n, n)
        scale = max(abs(x) for x in n)
        if q <= mpmath.mpf(10) ** (-r.digits // 2) * scale ** 2:
            raise NotPerpendicularizable("circuit faces have no common perpendicular plane")
        n = [x / mpmath.sqrt(q) for x in n]
        ref = _upper_reference(r, circuit)
        s = None
        for t, p in vertices(r):
            if ref in t:
                ip = minkowski_inner(p, n)
                if abs(ip) > mpmath.mpf(10) ** (-r.digits // 2):
                    s = ip
                    break
        if s is not None and s > 0:
            n = [-x for x in n]
        return CuttingPlane(tuple(n), circuit)


def mutation_rotation(r, circuit, plane):
    """Isometry fixing the cutting plane and cycling the circuit normals.

    ``Rot = [v2 v3 v1 n] [v1 v2 v3 n]^-1`` on column vectors.
    """
    with mp.workdps(r.digits + 10):
        v1, v2, v3 = (mpmath.matrix(r.normal(f)) for f in circuit.faces)
        n = mpmath.matrix(plane.normal)

        def cols(*vs):
            M = mpmath.matrix(4, 4)
            for j, v in enumerate(vs):
                for i in range(4):
                    M[i, j] = v[i]
            return M

        M1 = cols(v1, v2, v3, n)
        if abs(mpmath.det(M1)) < mpmath.mpf(10) ** (-r.digits // 2):
            raise DegenerateBasis("circuit normals and cutting plane are not independent")
        return cols(v2, v3, v1, n) * mpmath.inverse(M1)


def isometry_defects(Rot):
    """``(max |Rot^T J Rot - J|, max |Rot^3 - I|)``."""
    J = mpmath.diag(list(SIGN))
    a = Rot.T * J * Rot - J
    b = Rot * Rot * Rot - mpmath.eye(4)
    return (max(abs(x) for x in a), max(abs(x) for x in b))


def sides_from_vertices(r, plane):
    """``{face: 'upper' | 'lower'}`` for faces off the circuit, by vertex signs."""
    cset = set(plane.circuit.faces)
    tol = mpmath.mpf(10) ** (-r.digits // 2)
    signs = {f: set() for f in r.poly.faces if f not in cset}
    with mp.workdps(r.digits + 10):
        for t, p in vertices(r):
            ip = minkowski_inner(p, plane.normal)
            s = 0 if abs(ip) < tol else (1 if ip > 0 else -1)
            for f in t:
                if f in signs and s:
                    signs[f].add(s)
    sides = {}
    for f, s in signs.items():
        if len(s) != 1:
            raise StraddlingFace(f"face {f} has vertices on both sides of the cutting plane")
        sides[f] = "upper" if s == {-1} else "lower"
    return sides


def mutate_geometric(r, circuit):
    """Rotate the lower side by 2*pi/3 about the common perpendicular of the circuit.

    The rotation carries ``circuit.faces[i]`` to ``circuit.faces[i - 1]``,
    the same step as :func:`combinat.mutate_combinatorial`.
    """
    from .errors import IneligibleCircuit

    if not circuit.eligible:
        raise IneligibleCircuit(f"circuit angles {circuit.angles} are not all equal")
    plane = cutting_plane(r, circuit)
    sides = sides_from_vertices(r, plane)
    c = circuit.faces
    Rot = mutation_rotation(r, combinat.PrismaticCircuit((c[0], c[2], c[1]), circuit.angles), plane)
    new_poly = combinat.mutate_combinatorial(r.poly, circuit, sides)
    with mp.workdps(r.digits + 10):
        normals = []
        for f, v in zip(r.poly.faces, r.normals):
            if sides.get(f) == "lower":
                w = Rot * mpmath.matrix(v)
                normals.append(tuple(w[i] for i in range(4)))
            else:
                normals.append(tuple(v))
        idx = tuple(new_poly.index(f) for f in r.gauge)
        if any(sides.get(f) == "lower" for f in r.gauge):
            normals = canonical_gauge(normals, idx)
        _check_combinatorics(new_poly, normals)
    return replace(r, poly=new_poly, normals=tuple(normals))


# ---------------------------------------------------------------------------
# Moebius representation


@dataclass(frozen=True)
class Reflection:
    """``z -> (a conj(z) + b) / (c conj(z) + d)`` with ``ad - bc = 1``."""

    face: str
    matrix: tuple  # ((a, b), (c, d)) as mpc

    def compose(self, other):
        """Holomorphic matrix of ``self o other``."""
        (a, b), (c, d) = self.matrix
        (e, f), (g, h) = other.matrix
        e, f, g, h = (mpmath.conj(x) for x in (e, f, g, h))
        return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))

    def __call__(self, z):
        (a, b), (c, d) = self.matrix
        w = mpmath.conj(z)
        if w == mpmath.inf:
            return a / c if c else mpmath.inf
        den = c * w + d
        return mpmath.inf if den == 0 else (a * w + b) / den


def boundary_point(xi):
    """Light-cone vector for a point of C u {inf} (ball south pole goes to inf)."""
    if xi == mpmath.inf:
        return (mpmath.mpf(1), mpmath.mpf(0), mpmath.mpf(0), mpmath.mpf(-1))
    r2 = abs(xi) ** 2
    return (1 + r2, 2 * xi.real, 2 * xi.imag, 1 - r2)


def boundary_coordinate(p):
    """Inverse of :func:`boundary_point` for a null vector ``p``."""
    s = [x / p[0] for x in p[1:]]
    if abs(1 + s[2]) < mpmath.mpf(10) ** (-mp.dps // 2):
        return mpmath.inf
    return mpmath.mpc(s[0], s[1]) / (1 + s[2])


def reflection_matrix(v):
    """SL(2,C) matrix of the anti-Moebius reflection in the plane with normal ``v``."""
    t, x, y, z = (mpmath.mpf(c) for c in v)
    w = mpmath.mpc(x, y)
    i = mpmath.mpc(0, 1)
    return ((-i * w, i * (t - z)), (-i * (t + z), i * mpmath.conj(w)))


def to_moebius_generators(r):
    with mp.workdps(r.digits + 10):
        return [Reflection(f, reflection_matrix(v)) for f, v in zip(r.poly.faces, r.normals)]


def mat_mul(A, B):
    return ((A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
            (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]))


def mat_trace(A):
    return A[0][0] + A[1][1]


# ---------------------------------------------------------------------------
# comparisons and export


def gram_congruent(G1, G2, tol):
    """Face permutation ``perm`` with ``G1[i, j] ~ G2[perm[i], perm[j]]``, or None."""
    n = G1.rows
    if G2.rows != n:
        return None
    rows1 = [sorted(float(G1[i, j]) for j in range(n)) for i in range(n)]
    rows2 = [sorted(float(G2[i, j]) for j in range(n)) for i in range(n)]
    cand = [[k for k in range(n) if np.allclose(rows1[i], rows2[k], atol=1e-8)] for i in range(n)]
    perm = [None] * n

    def extend(i, used):
        if i == n:
            return True
        for k in cand[i]:
            if k in used:
                continue
            if all(abs(G1[i, j] - G2[k, perm[j]]) < tol for j in range(i)):
                perm[i] = k
                if extend(i + 1, used | {k}):
                    return True
        return False

    return tuple(perm) if extend(0, frozenset()) else None


def klein(p):
    return tuple(float(x / p[0]) for x in p[1:])


def to_off(r):
    """OFF mesh of the polyhedron with vertices in the Klein model."""
    verts = vertices(r)
    pts = [np.array(klein(p)) for _, p in verts]
    lines = ["OFF", f"{len(pts)} {r.poly.n_faces} {r.poly.n_edges}"]
    lines.extend(" ".join(f"{c:.12f}" for c in pt) for pt in pts)
    for f in r.poly.faces:
        ids = [k for k, (t, _) in enumerate(verts) if f in t]
        ctr = np.mean([pts[k] for k in ids], axis=0)
        nrm = np.array([float(x) for x in r.normal(f)[1:]])
        e1 = pts[ids[0]] - ctr
        e1 -= nrm * (e1 @ nrm) / (nrm @ nrm)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(nrm / np.linalg.norm(nrm), e1)
        ids.sort(key=lambda k: math.atan2((pts[k] - ctr) @ e2, (pts[k] - ctr) @ e1))
        lines.append(f"{len(ids)} " + " ".join(map(str, ids)))
    return "\n".join(lines) + "\n"
