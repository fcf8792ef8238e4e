"""Property-based checks over the glued corpus, relabelings and random algebraic data."""
import flint
import mpmath
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from mpmath import mp

from mutanthedron import algebraic as alg
from mutanthedron import combinat, corpus

Q_BY_KIND = {"A": (4, 5), "B": (4, 5), "C": (4, 5, 6, 7, 8, 9)}


@st.composite
def glued(draw):
    top = draw(st.sampled_from("ABC"))
    bottom = draw(st.sampled_from("ABC"))
    q = draw(st.sampled_from(sorted(set(Q_BY_KIND[top]) & set(Q_BY_KIND[bottom]))))
    k = draw(st.integers(0, 2))
    return combinat.build_half(top, q), combinat.build_half(bottom, q), k


@st.composite
def relabelled(draw):
    h1, h2, k = draw(glued())
    p = combinat.glue(h1, h2, k)
    names = draw(st.permutations([f"f{i}" for i in range(p.n_faces)]))
    mapping = dict(zip(p.faces, names))
    order = draw(st.permutations(names))
    return p, p.relabel(mapping, order), mapping


def _circuit_sets(p):
    return {frozenset(c.faces): c.eligible for c in combinat.find_prismatic_3_circuits(p)}


@given(glued())
def test_counts_of_glued_polyhedra(args):
    p = combinat.glue(*args)
    V, E, F = p.n_vertices, p.n_edges, p.n_faces
    assert 2 * E == 3 * V
    assert E == 3 * F - 6
    assert V - E + F == 2


@given(glued())
def test_glue_is_symmetric(args):
    h1, h2, k = args
    assert combinat.isomorphic(combinat.glue(h1, h2, k), combinat.glue(h2, h1, (-k) % 3))


@given(relabelled())
def test_circuits_do_not_depend_on_labels(args):
    p, q, mapping = args
    expected = {frozenset(mapping[f] for f in c): e for c, e in _circuit_sets(p).items()}
    assert _circuit_sets(q) == expected


@given(relabelled())
def test_validation_does_not_depend_on_labels(args):
    p, q, _ = args
    assert combinat.validate(p).ok == combinat.validate(q).ok


@given(glued())
def test_mutation_preserves_counts(args):
    p = combinat.glue(*args)
    m = combinat.mutate_combinatorial(p, corpus.circuit(p))
    assert (m.n_faces, m.n_edges, m.n_vertices) == (p.n_faces, p.n_edges, p.n_vertices)
    assert m.angle_multiset() == p.angle_multiset()


def test_corpus_invariants():
    """Signature, Euler and trivalence checks on every named polyhedron."""
    for e in corpus.corpus():
        p = e.build()
        assert p.n_vertices - p.n_edges + p.n_faces == 2
        assert 2 * p.n_edges == 3 * p.n_vertices
        assert all(len(t) == 3 for t in p.vertices)
        assert corpus.parse_name(e.name) == (e.top, e.bottom, e.q, e.mutant)


@st.composite
def irreducible_poly(draw, max_degree=4):
    d = draw(st.integers(1, max_degree))
    coeffs = draw(st.lists(st.integers(-9, 9), min_size=d + 1, max_size=d + 1))
    lead = draw(st.integers(1, 4))
    coeffs[-1] = lead
    f = flint.fmpz_poly(coeffs)
    c, factors = f.factor()
    # keep the primitive irreducible factor of highest degree
    g = max((fac for fac, _ in factors), key=lambda fac: fac.degree())
    return alg.IntPoly.normalized([int(x) for x in g.coeffs()])


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(irreducible_poly(), st.data())
def test_recognition_round_trip(p, data):
    roots = p.roots(160)
    z = roots[data.draw(st.integers(0, len(roots) - 1))]
    got = alg.recognize_minpoly(z, dmax=8, digits=120)
    assert got == p
    with mp.workdps(140):
        assert abs(mpmath.polyval(list(reversed(got.coeffs)), z)) < mpmath.mpf(10) ** -72


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-10 ** 6, 10 ** 6), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_lll_properties(rows):
    det = flint.fmpz_mat(rows).det()
    if det == 0:
        return
    reduced = alg.lll_reduce(rows)
    assert abs(flint.fmpz_mat(reduced).det()) == abs(det)
    assert alg.lovasz_holds(reduced)
    # same lattice: each reduced row is an integer combination of the input rows
    sol = flint.fmpq_mat(flint.fmpz_mat(rows).transpose()).solve(flint.fmpq_mat(flint.fmpz_mat(reduced).transpose()))
    assert all(sol[i, j].q == 1 for i in range(sol.nrows()) for j in range(sol.ncols()))
