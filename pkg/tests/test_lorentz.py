import json
import math

import mpmath
import pytest
from mpmath import mp

from mutanthedron import combinat, corpus, lorentz, reference
from mutanthedron.errors import NonCompact, NotPerpendicularizable, NotRealizable

TIGHT = mpmath.mpf(10) ** -40


def prism_text(q, cap=(2, 2, 3), bottom=(2, 2, 3)):
    lines = [f"face {f}" for f in ("top", "a", "b", "c", "bot")]
    lines += [f"edge top {f} {n}" for f, n in zip("abc", cap)]
    lines += [f"edge bot {f} {n}" for f, n in zip("abc", bottom)]
    lines += [f"edge a b {q}", f"edge b c {q}", f"edge c a {q}"]
    return "\n".join(lines)


def test_inner_product_examples():
    with mp.workdps(60):
        assert lorentz.minkowski_inner((1, 0, 0, 0), (1, 0, 0, 0)) == -1
        N = reference.normals_aa5()
        rows = [[N[i, j] for j in range(4)] for i in range(5)]
        assert abs(lorentz.minkowski_inner(rows[0], rows[3]) + mpmath.mpf(1) / 2) < TIGHT
        assert abs(2 * lorentz.minkowski_inner(rows[4], rows[4]) - 2) < TIGHT


def test_realization_invariants(aa5):
    with mp.workdps(aa5.digits + 10):
        for v in aa5.normals:
            assert abs(lorentz.minkowski_inner(v, v) - 1) < TIGHT
        G = lorentz.gram(aa5)
        for i in range(5):
            assert G[i, i] == pytest.approx(2)
            for j in range(5):
                a, b = aa5.poly.faces[i], aa5.poly.faces[j]
                if i != j and not aa5.poly.adjacent(a, b):
                    assert G[i, j] <= -2 + TIGHT
        # gauge
        assert aa5.normals[0] == (0, 0, 0, 1)
        assert aa5.normals[1][0] == aa5.normals[1][1] == 0 and aa5.normals[1][2] < 0
        assert aa5.normals[2][0] == 0
        # one negative eigenvalue
        eig = mpmath.eigsy(G)[0]
        assert sum(1 for x in eig if x < -TIGHT) == 1


def test_aa4_lateral_entries():
    r = lorentz.realize(corpus.build("AA4"), 50)
    G = lorentz.gram(r)
    i, j = r.poly.index("lat_0"), r.poly.index("lat_1")
    with mp.workdps(60):
        assert abs(G[i, j] + mpmath.sqrt(2)) < TIGHT


def test_unrealizable_prism():
    p = combinat.parse_polyhedron(prism_text(3))
    assert not combinat.validate(p).ok
    with pytest.raises(NotRealizable):
        lorentz.realize(p, 30, max_restarts=4)


def test_refine_fixed_point(aa5):
    r1 = lorentz.refine(aa5, 80)
    r2 = lorentz.refine(r1, 80)
    with mp.workdps(90):
        assert max(abs(a - b) for u, v in zip(r1.normals, r2.normals) for a, b in zip(u, v)) < mpmath.mpf(10) ** -70


def test_newton_converges_quadratically(aa5):
    """Successive residual exponents at least 1.8x apart once below 1e-8."""
    with mp.workdps(60):
        bumped = tuple(tuple(x + mpmath.mpf(10) ** -9 * ((k * 7 + i) % 5 - 2) for i, x in enumerate(v))
                       for k, v in enumerate(aa5.normals))
    r = lorentz.refine(lorentz.with_normals(aa5, bumped), 1000)
    hist = [float(-mpmath.log10(h)) for h in r.history if h > 0]
    pairs = [(a, b) for a, b in zip(hist, hist[1:]) if a > 8 and b < 990]
    assert pairs
    for a, b in pairs:
        assert b / a >= 1.8


def test_vertices_aa5(aa5):
    verts = lorentz.vertices(aa5)
    assert len(verts) == 6
    with mp.workdps(aa5.digits + 10):
        for t, p in verts:
            assert abs(lorentz.minkowski_inner(p, p) + 1) < TIGHT
            assert p[0] > 0
            for f in aa5.poly.faces:
                ip = lorentz.minkowski_inner(p, aa5.normal(f))
                if f in t:
                    assert abs(ip) < TIGHT
                else:
                    # outward normals: vertices lie on the positive side of every other face
                    assert ip > 0


def test_noncompact_vertex_detected(aa5):
    bad = list(aa5.normals)
    with mp.workdps(60):
        # push the bottom cap so far out that it meets the lateral edges beyond infinity
        d = mpmath.mpf(10)
        bad[4] = (-mpmath.sinh(d), mpmath.mpf(0), mpmath.mpf(0), -mpmath.cosh(d))
    with pytest.raises(NonCompact):
        lorentz.vertices(lorentz.with_normals(aa5, bad))


def test_cutting_plane_aa5(aa5):
    plane = lorentz.cutting_plane(aa5, corpus.circuit(aa5.poly))
    with mp.workdps(60):
        expected = reference.cutting_normal_aa5()
        assert max(abs(a - b) for a, b in zip(plane.normal, expected)) < TIGHT
        assert abs(lorentz.minkowski_inner(plane.normal, plane.normal) - 1) < TIGHT
        for f in corpus.CIRCUIT:
            assert abs(lorentz.minkowski_inner(plane.normal, aa5.normal(f))) < TIGHT


def test_cutting_plane_rejects_vertex_triple(aa5):
    c = combinat.PrismaticCircuit(("cap_top", "lat_0", "lat_1"), (2, 2, 5))
    with pytest.raises(NotPerpendicularizable):
        lorentz.cutting_plane(aa5, c)


def test_rotation_is_isometry_of_order_three(aa5):
    c = corpus.circuit(aa5.poly)
    Rot = lorentz.mutation_rotation(aa5, c, lorentz.cutting_plane(aa5, c))
    with mp.workdps(aa5.digits + 10):
        iso, order = lorentz.isometry_defects(Rot)
    assert iso < mpmath.mpf(10) ** -38 and order < mpmath.mpf(10) ** -38


def test_geometric_mutation_matches_mutant(aa5, aa5m):
    c = corpus.circuit(aa5.poly)
    m = lorentz.mutate_geometric(aa5, c)
    with mp.workdps(60):
        # only the last normal changes, and it becomes the closed-form row of the mutant
        for f in reference.AA5_FACES[:4]:
            assert m.normal(f) == aa5.normal(f)
        N = reference.normals_aa5m()
        assert max(abs(m.normal("cap_bot")[j] - N[4, j]) for j in range(4)) < TIGHT
        assert lorentz.gram_congruent(lorentz.gram(m), lorentz.gram(aa5m), TIGHT) is not None


def test_repeated_geometric_mutation(aa5, aa5m):
    """Two turns give the mirror image of one turn; three give the original."""
    c = corpus.circuit(aa5.poly)
    twice = lorentz.mutate_geometric(lorentz.mutate_geometric(aa5, c), c)
    thrice = lorentz.mutate_geometric(twice, c)
    with mp.workdps(60):
        assert lorentz.gram_congruent(lorentz.gram(twice), lorentz.gram(aa5m), TIGHT) is not None
        assert lorentz.gram_congruent(lorentz.gram(twice), lorentz.gram(aa5), TIGHT) is None
        assert lorentz.gram_congruent(lorentz.gram(thrice), lorentz.gram(aa5), TIGHT) is not None


def test_geometric_mutation_moves_halves_rigidly():
    r = lorentz.realize(corpus.build("BC4"), 50)
    c = corpus.circuit(r.poly)
    m = lorentz.mutate_geometric(r, c)
    sides = lorentz.sides_from_vertices(r, lorentz.cutting_plane(r, c))
    G1, G2 = lorentz.gram(r), lorentz.gram(m)
    with mp.workdps(60):
        for side in ("upper", "lower"):
            block = [f for f in r.poly.faces if f in c.faces or sides.get(f) == side]
            e1 = sorted(float(G1[r.poly.index(a), r.poly.index(b)]) for a in block for b in block)
            e2 = sorted(float(G2[m.poly.index(a), m.poly.index(b)]) for a in block for b in block)
            assert e1 == pytest.approx(e2, abs=1e-30)


def test_mutation_agrees_with_combinatorial_mutant():
    r = lorentz.realize(corpus.build("CC5"), 50)
    m = lorentz.mutate_geometric(r, corpus.circuit(r.poly))
    assert combinat.isomorphic(m.poly, corpus.build("CC5m"))
    rm = lorentz.realize(corpus.build("CC5m"), 50)
    with mp.workdps(60):
        assert lorentz.gram_congruent(lorentz.gram(m), lorentz.gram(rm), TIGHT) is not None


def test_reflections_are_involutions(aa5):
    with mp.workdps(60):
        for g in lorentz.to_moebius_generators(aa5):
            (a, b), (c, d) = g.matrix
            assert abs(a * d - b * c - 1) < TIGHT
            M = g.compose(g)
            # +-identity as a Moebius map
            assert abs(M[0][1]) < TIGHT and abs(M[1][0]) < TIGHT and abs(M[0][0] - M[1][1]) < TIGHT


def test_moebius_action_matches_lorentz_reflection(aa5):
    samples = [mpmath.mpc(0.3, 0.2), mpmath.mpc(-1.1, 0.5), mpmath.mpc(0, 2), mpmath.mpc(4, -3)]
    with mp.workdps(60):
        for g, v in zip(lorentz.to_moebius_generators(aa5), aa5.normals):
            for xi in samples:
                x = lorentz.boundary_point(xi)
                ip = lorentz.minkowski_inner(x, v)
                y = [a - 2 * ip * b for a, b in zip(x, v)]
                assert abs(g(xi) - lorentz.boundary_coordinate(y)) < mpmath.mpf(10) ** -40


def test_elliptic_traces_aa5(aa5):
    gens = lorentz.to_moebius_generators(aa5)
    idx = aa5.poly.index
    with mp.workdps(60):
        P = gens[idx("lat_0")].compose(gens[idx("lat_1")])
        tr2 = lorentz.mat_trace(lorentz.mat_mul(P, P))
        assert abs(tr2 - 2 * mpmath.cos(2 * mpmath.pi / 5)) < TIGHT


def test_archive_round_trip(aa5, tmp_path):
    path = tmp_path / "aa5.json"
    path.write_text(aa5.dumps())
    back = lorentz.RealizedPolyhedron.from_archive(json.loads(path.read_text()))
    assert back.poly.to_text() == aa5.poly.to_text()
    assert back.gauge == aa5.gauge and back.digits == aa5.digits
    with mp.workdps(60):
        assert max(abs(a - b) for u, v in zip(back.normals, aa5.normals) for a, b in zip(u, v)) < TIGHT
    assert back.dumps() == aa5.dumps()


def test_off_export(aa5):
    lines = lorentz.to_off(aa5).splitlines()
    assert lines[0] == "OFF"
    nv, nf, ne = map(int, lines[1].split())
    assert (nv, nf, ne) == (6, 5, 9)
    pts = [tuple(map(float, line.split())) for line in lines[2:2 + nv]]
    assert all(math.fsum(c * c for c in p) < 1 for p in pts)
    sizes = sorted(int(line.split()[0]) for line in lines[2 + nv:])
    assert sizes == [3, 3, 4, 4, 4]
