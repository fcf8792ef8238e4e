from fractions import Fraction

import mpmath
import pytest
from mpmath import mp

from mutanthedron import algebraic as alg
from mutanthedron import reference
from mutanthedron.errors import NoRelation

from lattice_oracle import shortest_norm2

AA5_POLY = alg.IntPoly.from_descending([1, -2, -1, 2, -19])


def at(dps, fn):
    with mp.workdps(dps):
        return +fn()


def aa5_root(dps):
    # 1/2 - (i/2) sqrt(-5 + 8 sqrt 5)
    with mp.workdps(dps + 10):
        return mpmath.mpc(0.5, -mpmath.sqrt(-5 + 8 * mpmath.sqrt(5)) / 2)


def sqrt_number(n):
    return alg.AlgebraicNumber(alg.IntPoly.from_descending([1, 0, -n]), mpmath.sqrt(n))


# -- lattice reduction


def test_lll_identity():
    eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert alg.lll_reduce(eye) == eye


def test_lll_skewed_2d():
    basis = [[1, 1000000], [0, 2000001]]
    reduced = alg.lll_reduce(basis)
    shortest = min(sum(x * x for x in r) for r in reduced)
    assert shortest == shortest_norm2(basis, shortest)
    assert alg.lovasz_holds(reduced)


def test_lll_preserves_determinant():
    basis = [[3, 17, 4], [11, -2, 9], [5, 5, 40]]
    for backend in ("flint", "python"):
        reduced = alg.lll_reduce(basis, backend=backend)
        assert abs(mpmath.det(mpmath.matrix(reduced))) == abs(mpmath.det(mpmath.matrix(basis)))
        assert alg.lovasz_holds(reduced)


def test_lll_backends_agree_on_shortest():
    basis = [[201, 37, 0, 1], [1648, 297, 1, 0], [0, 1, 998, 3], [5, 5, 5, 5]]
    a = alg.lll_reduce(basis, backend="flint")
    b = alg.lll_reduce(basis, backend="python")
    assert min(sum(x * x for x in r) for r in a) == min(sum(x * x for x in r) for r in b)


def test_lovasz_detects_unreduced():
    assert not alg.lovasz_holds([[1, 1000000], [0, 2000001]])


# -- minimal polynomials


@pytest.mark.parametrize("value,descending", [
    (reference.phi, [1, -1, -1]),
    (reference.alpha, [5, 15, 9]),
    (reference.beta, [5, 20, 19]),
])
def test_recognize_quadratics(value, descending):
    p = alg.recognize_minpoly(at(80, value), digits=60)
    assert p == alg.IntPoly.from_descending(descending)


def test_recognize_aa5_quartic():
    p = alg.recognize_minpoly(aa5_root(120), digits=100)
    assert p == AA5_POLY
    assert p.signature() == (2, 1)


def test_recognize_with_verify_callable():
    p = alg.recognize_minpoly(at(80, reference.phi), digits=60, verify=lambda dps: at(dps, reference.phi))
    assert p == alg.IntPoly.from_descending([1, -1, -1])


def test_recognize_transcendental_fails():
    with pytest.raises(NoRelation):
        alg.recognize_minpoly(at(100, lambda: mpmath.pi), dmax=6, digits=80)


def test_recognize_round_trip_of_roots():
    p = alg.IntPoly.from_descending([3, 0, -7, 2, 5])  # irreducible over Q
    for z in p.roots(150):
        assert alg.recognize_minpoly(z, digits=120) == p


def test_integrality():
    assert alg.is_algebraic_integer(alg.IntPoly.from_descending([1, -1, -1]))
    assert not alg.is_algebraic_integer(alg.IntPoly.from_descending([5, 15, 9]))
    assert not alg.is_algebraic_integer(alg.IntPoly.from_descending([5, 20, 19]))


def test_intpoly_normalized():
    p = alg.IntPoly.normalized([-6, 0, -4])
    assert p == alg.IntPoly.from_descending([2, 0, 3])
    assert p.leading > 0


def test_algebraic_number_residual():
    a = alg.recognize(at(130, reference.alpha), digits=60)
    with mp.workdps(120):
        z = a.value(100)
        assert abs(mpmath.polyval(list(reversed(a.minpoly.coeffs)), z)) < mpmath.mpf(10) ** -30
        assert alg.isolation_radius(a.minpoly, a.approx) > 0


# -- fields


def test_join_of_nothing_is_q():
    f = alg.primitive_element(alg.field_join([], 60), (), 60)
    assert f.degree == 1


def test_join_sqrt2():
    f = alg.field_join([sqrt_number(2)], 60)
    assert f.degree == 2
    alg.primitive_element(f, [sqrt_number(2)], 60)
    assert f.poly == alg.IntPoly.from_descending([1, 0, -2])


def test_join_degrees_multiply():
    with mp.workdps(300):
        gens = [sqrt_number(2), sqrt_number(3), alg.AlgebraicNumber(alg.IntPoly.from_descending([1, 0, 0, -2]),
                                                                     mpmath.cbrt(2))]
    f = alg.field_join(gens, 100)
    assert f.degree == 12
    g = alg.field_join(gens[:2], 100)
    assert g.degree == 4
    alg.primitive_element(g, (), 100)
    assert g.power_basis
    # sqrt(6) is already inside Q(sqrt 2, sqrt 3)
    assert alg.field_join([sqrt_number(6)], 100, base=g).degree == 4


def test_contains_phi_squared():
    with mp.workdps(120):
        phi = alg.AlgebraicNumber(alg.IntPoly.from_descending([1, -1, -1]), reference.phi())
        f = alg.from_algebraic(phi)
        coords = alg.contains(f, reference.phi() ** 2, 50)
    assert tuple(coords) == (Fraction(1), Fraction(1))
    assert coords.basis == "power"


def test_sqrt3_not_in_q_sqrt2():
    with mp.workdps(450):
        f = alg.from_algebraic(sqrt_number(2))
        assert alg.contains(f, mpmath.sqrt(3), 200) is None


def test_contains_theta_is_unit_vector():
    with mp.workdps(300):
        f = alg.field_join([sqrt_number(2), sqrt_number(3)], 100)
        alg.primitive_element(f, (), 100)
        coords = alg.contains(f, f.theta, 100)
    assert tuple(coords) == (0, 1, 0, 0)


def test_evaluate_coordinates():
    with mp.workdps(300):
        f = alg.field_join([sqrt_number(2), sqrt_number(5)], 100)
        alg.primitive_element(f, (), 100)
        x = mpmath.sqrt(10) - 3 * mpmath.sqrt(2)
        coords = alg.contains(f, x, 100)
        assert abs(f.evaluate(coords, 120) - x) < mpmath.mpf(10) ** -100


def test_same_field():
    with mp.workdps(300):
        a = alg.field_join([sqrt_number(2), sqrt_number(3)], 100)
        b = alg.field_join([sqrt_number(6), sqrt_number(3)], 100)
        c = alg.field_join([sqrt_number(2), sqrt_number(5)], 100)
    assert alg.same_field(a, b, 100)
    assert not alg.same_field(a, c, 100)


def test_field_json_round_trip():
    with mp.workdps(300):
        f = alg.field_join([sqrt_number(2), sqrt_number(3)], 100)
        alg.primitive_element(f, (), 100)
        g = alg.NumberField.from_json(f.to_json(220))
        assert g.degree == 4 and g.poly == f.poly
        assert alg.same_field(f, g, 100)
