"""Recover exact algebraic data from high-precision floating-point values.

Everything here is driven by integer-relation finding with LLL: a value
``x`` is algebraic of degree ``d`` when the lattice spanned by
``(e_k, S*Re x^k, S*Im x^k)`` for ``k = 0..d`` contains a vector whose
tail is tiny.  A relation is only accepted if it survives a second check
at twice the precision it was found at.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import mpmath
from mpmath import mp

from .errors import JoinFailure, NoRelation

try:
    import flint
except ImportError:  # pragma: no cover - exercised only without python-flint
    flint = None

DEFAULT_DIGITS = 250
DEFAULT_DMAX = 32
HEIGHT_CAP = 10 ** 40
# primitive-element search: c = 1, -1, 2, -2, ..., 8, -8
JOIN_COEFFS = tuple(s * c for c in range(1, 9) for s in (1, -1))
JOIN_RETRIES = 20
# primitive elements tested for a power-basis presentation
POWER_BASIS_TRIES = 3


# ---------------------------------------------------------------------------
# lattice reduction


def _lll_python(basis, delta):
    """Textbook LLL with exact rational Gram-Schmidt; slow but dependency free."""
    b = [list(map(int, row)) for row in basis]
    n = len(b)
    if n == 0:
        return b

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def gso():
        bstar, mu, norms = [], [[Fraction(0)] * n for _ in range(n)], []
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = dot(b[i], bstar[j]) / norms[j] if norms[j] else Fraction(0)
                v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
            bstar.append(v)
            norms.append(dot(v, v))
        return mu, norms

    mu, norms = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            r = round(mu[k][j])
            if r:
                b[k] = [x - r * y for x, y in zip(b[k], b[j])]
                mu, norms = gso()
        if norms[k] >= (Fraction(delta) - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            mu, norms = gso()
            k = max(k - 1, 1)
    return b


def lll_reduce(basis, delta=0.99, backend="auto"):
    """LLL-reduce the rows of an integer matrix.

    Parameters
    ----------
    basis : sequence of sequences of int
        Linearly independent rows.
    delta : float
        Lovasz parameter.
    backend : {"auto", "flint", "python"}
        ``"flint"`` uses python-flint (fast, C); ``"python"`` is the exact
        rational reference implementation.
    """
    rows = [[int(v) for v in row] for row in basis]
    if not rows:
        return []
    if backend == "python" or (backend == "auto" and flint is None):
        return _lll_python(rows, delta)
    m = flint.fmpz_mat(rows).lll(delta=delta)
    return [[int(m[i, j]) for j in range(m.ncols())] for i in range(m.nrows())]


def lovasz_holds(basis, delta=0.99):
    """Check size reduction and the Lovasz condition on an integer basis."""
    b = [[Fraction(int(x)) for x in row] for row in basis]
    n = len(b)
    bstar, norms = [], []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        v = list(b[i])
        for j in range(i):
            mu[i][j] = sum(x * y for x, y in zip(b[i], bstar[j])) / norms[j]
            v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
        bstar.append(v)
        norms.append(sum(x * x for x in v))
    eta = Fraction(51, 100)
    for i in range(1, n):
        if any(abs(mu[i][j]) > eta for j in range(i)):
            return False
        if norms[i] < (Fraction(delta) - mu[i][i - 1] ** 2) * norms[i - 1]:
            return False
    return True


# ---------------------------------------------------------------------------
# polynomials and algebraic numbers


def _to_mpc(x):
    if isinstance(x, (tuple, list)):
        return mpmath.mpc(x[0], x[1])
    if isinstance(x, str):
        return mpmath.mpmathify(x)
    return mpmath.mpc(x)


@dataclass(frozen=True)
class IntPoly:
    """Primitive integer polynomial, coefficients in ascending degree order."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(v) for v in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def normalized(cls, coeffs):
        c = [int(v) for v in coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        g = reduce(math.gcd, c, 0) or 1
        if c[-1] < 0:
            g = -g
        return cls(tuple(v // g for v in c))

    @classmethod
    def from_descending(cls, coeffs):
        return cls.normalized(list(reversed(list(coeffs))))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1]

    @property
    def is_monic(self):
        return self.leading == 1

    @property
    def height(self):
        return max(abs(c) for c in self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        return IntPoly(tuple(k * c for k, c in enumerate(self.coeffs))[1:] or (0,))

    def roots(self, dps=30):
        """All complex roots, at ``dps`` digits."""
        if flint is not None:
            old = flint.ctx.prec
            flint.ctx.prec = int(dps * 3.33) + 20
            try:
                roots = flint.fmpz_poly(list(self.coeffs)).complex_roots()
                out = []
                with mp.workdps(dps):
                    for r, mult in roots:
                        z = mpmath.mpc(mpmath.mpf(r.real.mid().str(dps + 5, radius=False)),
                                       mpmath.mpf(r.imag.mid().str(dps + 5, radius=False)))
                        out.extend([z] * mult)
                return out
            finally:
                flint.ctx.prec = old
        with mp.workdps(dps):  # pragma: no cover
            return list(mpmath.polyroots(list(reversed(self.coeffs)), maxsteps=200, extraprec=4 * dps))

    def signature(self):
        """``(r1, r2)``: number of real roots and of complex-conjugate pairs."""
        if flint is not None:
            # flint certifies real roots by an exactly zero imaginary part
            r1 = sum(m for r, m in flint.fmpz_poly(list(self.coeffs)).complex_roots()
                     if r.imag.mid() == 0 and r.imag.rad() == 0)
        else:  # pragma: no cover
            r1 = sum(1 for z in self.roots() if abs(z.imag) < 1e-20)
        return r1, (self.degree - r1) // 2

    def __str__(self):
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mon = "x" if k == 1 else f"x^{k}"
                body = mon if a == 1 else f"{a}*{mon}"
            terms.append((sign, body))
        if not terms:
            return "0"
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s

    def to_json(self):
        return list(self.coeffs)


def _newton_polish(poly, z, dps):
    """Polish a root of ``poly`` near ``z`` to ``dps`` digits (quadratic steps)."""
    dpoly = poly.derivative()
    with mp.workdps(dps + 10):
        z = mpmath.mpc(z)
        prec = 15
        while True:
            prec = min(2 * prec, dps + 10)
            with mp.workdps(prec + 10):
                z = z - poly(z) / dpoly(z)
            if prec >= dps + 10:
                break
        for _ in range(2):
            z = z - poly(z) / dpoly(z)
    return z


@dataclass(frozen=True, eq=False)
class AlgebraicNumber:
    """A root of ``minpoly`` singled out by the approximation ``approx``."""

    minpoly: IntPoly
    approx: object
    radius: object = None
    _values: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.radius is None:
            object.__setattr__(self, "radius", isolation_radius(self.minpoly, self.approx))

    def value(self, dps):
        """The isolated root to ``dps`` digits (cached per precision)."""
        z = self._values.get(dps)
        if z is None:
            best = max((d for d in self._values if d >= dps), default=None)
            if best is not None:
                with mp.workdps(dps):
                    z = +self._values[best]
            else:
                start = self._values[max(self._values)] if self._values else self.approx
                z = _newton_polish(self.minpoly, start, dps)
            self._values[dps] = z
        return z

    @property
    def degree(self):
        return self.minpoly.degree

    def is_real(self):
        return self.degree == 1 or abs(mpmath.mpc(self.approx).imag) < self.radius

    def to_json(self, digits=30):
        with mp.workdps(digits):
            z = mpmath.mpc(self.approx)
            return {"coefficients": self.minpoly.to_json(),
                    "approx": [mpmath.nstr(z.real, digits), mpmath.nstr(z.imag, digits)],
                    "digits": digits}

    def __repr__(self):
        return f"AlgebraicNumber({self.minpoly}, {mpmath.nstr(mpmath.mpc(self.approx), 16)})"


def isolation_radius(poly, approx):
    if poly.degree <= 1:
        return mpmath.mpf(1)
    z = mpmath.mpc(approx)
    roots = poly.roots(30)
    dists = sorted(abs(r - z) for r in roots)
    return dists[1] / 3 if len(dists) > 1 else mpmath.mpf(1)


def rational(value):
    """The rational number ``value`` as an :class:`AlgebraicNumber`."""
    value = Fraction(value)
    return AlgebraicNumber(IntPoly.normalized([-value.numerator, value.denominator]), mpmath.mpf(value.numerator) / value.denominator)


def is_algebraic_integer(p):
    """A primitive minimal polynomial defines algebraic integers iff it is monic."""
    return p.leading == 1


# ---------------------------------------------------------------------------
# integer relations


def _verify_value(x, verify, dps):
    if verify is None:
        return None
    if callable(verify):
        return _to_mpc(verify(dps))
    return _to_mpc(verify)


def _relation_lattice(values, digits):
    """Rows ``(e_k, S Re v_k[, S Im v_k])`` for an integer-relation search."""
    scale = mpmath.mpf(10) ** digits
    cplx = any(abs(v.imag) > mpmath.mpf(10) ** (-digits) * max(1, abs(v)) for v in values)
    n = len(values)
    rows = []
    for k, v in enumerate(values):
        row = [0] * n
        row[k] = 1
        row.append(int(mpmath.nint(scale * v.real)))
        if cplx:
            row.append(int(mpmath.nint(scale * v.imag)))
        rows.append(row)
    return rows


def _rel_residual(coeffs, values):
    num = abs(mpmath.fsum(c * v for c, v in zip(coeffs, values)))
    den = max(1, mpmath.fsum(abs(c) * abs(v) for c, v in zip(coeffs, values)))
    return num / den


def find_relation(values, digits, require=None, height_cap=HEIGHT_CAP):
    """Small integer vector ``c`` with ``sum c_k values[k] ~ 0``, or None.

    ``require`` is an index whose coefficient must be nonzero.
    """
    with mp.workdps(digits + 20):
        vals = [_to_mpc(v) for v in values]
        rows = _relation_lattice(vals, digits)
        reduced = lll_reduce(rows)
        n = len(vals)
        tol = mpmath.mpf(10) ** (-0.6 * digits)
        for row in reduced:
            c = row[:n]
            if not any(c):
                continue
            if require is not None and c[require] == 0:
                continue
            if max(abs(v) for v in c) > height_cap:
                continue
            if _rel_residual(c, vals) < tol:
                return c
    return None


def _powers(x, d):
    out = [mpmath.mpc(1)]
    for _ in range(d):
        out.append(out[-1] * x)
    return out


def recognize_minpoly(x, dmax=DEFAULT_DMAX, digits=DEFAULT_DIGITS, verify=None, height_cap=HEIGHT_CAP):
    """Minimal polynomial of the algebraic number approximated by ``x``.

    Degrees are tried from 1 upward, so the first relation found is of
    minimal degree.  The relation is searched at ``digits`` digits and must
    re-verify at twice that: ``verify`` supplies ``x`` at ``2*digits``
    (a value, or a callable taking the number of digits).  Without
    ``verify`` the search runs on ``digits // 2`` digits and ``x`` itself
    is the doubled-precision check.

    Raises
    ------
    NoRelation
        When no stable relation exists for any degree up to ``dmax``.
    """
    if dmax > 32:
        raise ValueError("dmax is capped at 32")
    if verify is None:
        search = digits // 2
        with mp.workdps(digits + 20):
            x_hi = _to_mpc(x)
    else:
        search = digits
        with mp.workdps(2 * digits + 20):
            x_hi = _verify_value(x, verify, 2 * digits + 20)
    with mp.workdps(search + 20):
        x_lo = +_to_mpc(x)
    for d in range(1, dmax + 1):
        with mp.workdps(search + 20):
            c = find_relation(_powers(x_lo, d), search, require=d, height_cap=height_cap)
        if c is None:
            continue
        with mp.workdps(2 * search + 20):
            if _rel_residual(c, _powers(x_hi, d)) >= mpmath.mpf(10) ** (-1.2 * search):
                continue
        return IntPoly.normalized(c)
    raise NoRelation(f"no stable integer relation of degree <= {dmax} at {digits} digits")


def recognize(x, dmax=DEFAULT_DMAX, digits=DEFAULT_DIGITS, verify=None):
    """Wrap :func:`recognize_minpoly` into an :class:`AlgebraicNumber`."""
    p = recognize_minpoly(x, dmax=dmax, digits=digits, verify=verify)
    with mp.workdps(digits + 20):
        z = _to_mpc(verify(2 * digits + 20) if callable(verify) else (verify if verify is not None else x))
    return AlgebraicNumber(p, _newton_polish(p, z, digits))


# ---------------------------------------------------------------------------
# number fields


@dataclass
class NumberField:
    """A number field given by generators, with an optional primitive element.

    While a field is being built it is presented as a tower
    ``Q(g_1)(g_2)...(g_k)``: elements are written in the monomial basis
    ``g_1^a_1 ... g_k^a_k`` with ``0 <= a_i < e_i``, where ``e_i`` is the
    degree of ``g_i`` over the earlier generators.  These coordinates stay
    small even when a primitive element has a large minimal polynomial.

    :func:`primitive_element` attaches ``theta``.  When every generator can
    also be written in ``1, theta, ..., theta^(d-1)`` at the working
    precision, those coordinates are kept in ``expressions`` and the power
    basis becomes the field's basis.  High-degree fields whose primitive
    elements have large minimal polynomials keep the tower basis.
    """

    generators: list = field(default_factory=list)  # [(source, relative degree)]
    theta: AlgebraicNumber | None = None
    expressions: list = field(default_factory=list)  # rational coordinates per generator

    @property
    def degree(self):
        return math.prod(e for _, e in self.generators)

    @property
    def poly(self):
        if self.theta is None:
            raise ValueError("primitive element not computed; call primitive_element first")
        return self.theta.minpoly

    @property
    def power_basis(self):
        """True when every generator has been written in powers of ``theta``."""
        return self.theta is not None and (self.degree == 1 or bool(self.expressions))

    def basis(self, dps, kind="power"):
        """``1, theta, ...`` (``kind="power"``) or the tower monomials (``"tower"``)."""
        if kind == "power" and self.theta is not None:
            with mp.workdps(dps + 10):
                return _powers(self.theta.value(dps + 10), self.degree - 1)
        return self.tower_basis(dps)

    def tower_basis(self, dps):
        out = [mpmath.mpc(1)]
        with mp.workdps(dps + 10):
            for g, e in self.generators:
                pw = _powers(_source_value(g, dps + 10), e - 1)
                out = [b * p for p in pw for b in out]
        return out

    def evaluate(self, coords, dps):
        """The element with rational ``coords``; the basis is ``coords.basis`` if set."""
        kind = getattr(coords, "basis", "power")
        with mp.workdps(dps + 10):
            return mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * b
                               for c, b in zip(coords, self.basis(dps, kind)))

    def to_json(self, digits):
        """Generators as decimal strings good to ``digits``, plus ``theta``."""
        with mp.workdps(digits + 10):
            gens = []
            for g, e in self.generators:
                z = _source_value(g, digits + 10)
                gens.append({"value": [mpmath.nstr(z.real, digits, strip_zeros=False),
                                       mpmath.nstr(z.imag, digits, strip_zeros=False)],
                             "relative_degree": e})
        return {
            "degree": self.degree,
            "generators": gens,
            "theta": None if self.theta is None else self.theta.to_json(40),
            "expressions": [[str(c) for c in e] for e in self.expressions],
        }

    @classmethod
    def from_json(cls, doc):
        digits = max((len(g["value"][0]) for g in doc["generators"]), default=30)
        with mp.workdps(digits + 10):
            gens = [(mpmath.mpc(mpmath.mpf(g["value"][0]), mpmath.mpf(g["value"][1])), int(g["relative_degree"]))
                    for g in doc["generators"]]
        theta = None
        if doc.get("theta"):
            t = doc["theta"]
            with mp.workdps(int(t["digits"]) + 10):
                theta = AlgebraicNumber(IntPoly(tuple(t["coefficients"])),
                                        mpmath.mpc(mpmath.mpf(t["approx"][0]), mpmath.mpf(t["approx"][1])))
        exprs = [Coordinates((Fraction(c) for c in e), "power") for e in doc.get("expressions", [])]
        return cls(gens, theta, exprs)

    def __repr__(self):
        if self.theta is None:
            return f"NumberField(degree={self.degree})"
        return (f"NumberField(degree={self.degree}, poly={self.poly}, "
                f"theta~{mpmath.nstr(mpmath.mpc(self.theta.approx), 12)})")


def _source_value(g, dps):
    """Value of a generator: an AlgebraicNumber or a number held at high precision."""
    if isinstance(g, AlgebraicNumber):
        return g.value(dps)
    with mp.workdps(dps):
        return +_to_mpc(g)


def rationals():
    return NumberField([], rational(0))


def from_algebraic(a):
    """``Q(a)`` with ``a`` as its primitive element."""
    if a.degree == 1:
        return rationals()
    coords = Coordinates((Fraction(int(k == 1)) for k in range(a.degree)), "power")
    return NumberField([(a, a.degree)], a, [coords])


def _split(x, digits):
    """``(low, high)`` precision values of ``x`` for search and verification."""
    if isinstance(x, AlgebraicNumber):
        return x.value(digits + 20), x.value(2 * digits + 20)
    if isinstance(x, tuple) and len(x) == 2 and not isinstance(x[0], (int, float)):
        value, verify = x
        with mp.workdps(2 * digits + 20):
            hi = _verify_value(value, verify, 2 * digits + 20)
    else:
        value = hi = x
    with mp.workdps(digits + 20):
        lo = +_to_mpc(value)
    with mp.workdps(2 * digits + 20):
        hi = +_to_mpc(hi)
    return lo, hi


class Coordinates(tuple):
    """Rational coordinates tagged with the basis they refer to."""

    def __new__(cls, values, basis="power"):
        obj = super().__new__(cls, values)
        obj.basis = basis
        return obj


def _tower_values(f, x, e, dps, kind="tower"):
    """``b_j x^k`` for ``k <= e``; for ``e == 1`` just the basis and ``x``."""
    with mp.workdps(dps):
        basis = f.basis(dps, kind)
        if e == 1:
            return basis + [x]
        return [b * p for p in _powers(x, e) for b in basis]


def _tower_relation(f, x, e, digits, kind="tower"):
    """Verified integer relation showing ``x`` has degree <= e over ``f``.

    For ``e == 1`` the relation is among the basis and ``x`` (coefficient of
    ``x`` nonzero); otherwise among all ``b_j x^k``, ``k <= e``, with some
    ``k = e`` term.
    """
    lo, hi = _split(x, digits)
    d = f.degree
    with mp.workdps(digits + 20):
        vals = _tower_values(f, lo, e, digits + 20, kind)
        c = find_relation(vals, digits, require=d if e == 1 else None)
    if c is None or not any(c[e * d:]):
        return None
    with mp.workdps(2 * digits + 20):
        vals_hi = _tower_values(f, hi, e, 2 * digits + 20, kind)
        if _rel_residual(c, vals_hi) >= mpmath.mpf(10) ** (-1.2 * digits):
            return None
    return c


def contains(f, x, digits=DEFAULT_DIGITS):
    """Rational coordinates of ``x`` in ``f``, or None.

    ``x`` is an :class:`AlgebraicNumber`, a high-precision number, or a pair
    ``(value, verify)`` where ``verify`` gives the value at doubled digits.
    The powers of ``f.theta`` are tried first when a primitive element is
    attached, then the tower monomials; the returned :class:`Coordinates`
    record which basis matched.  Each relation is found at ``digits`` and
    re-verified at ``2*digits``.
    """
    if isinstance(x, AlgebraicNumber) and f.degree % x.degree:
        return None
    d = f.degree
    kinds = ("power", "tower") if f.theta is not None and d > 1 else ("tower",)
    for kind in kinds:
        c = _tower_relation(f, x, 1, digits, kind)
        if c is not None:
            return Coordinates((Fraction(-c[k], c[d]) for k in range(d)), kind)
    return None


def relative_degree(f, x, digits=DEFAULT_DIGITS, dmax=DEFAULT_DMAX):
    """Degree of ``x`` over ``f``, searched up to total degree ``dmax``.

    Raises
    ------
    JoinFailure
        When no relation is found within ``dmax``.
    """
    for e in range(1, dmax // f.degree + 1):
        if _tower_relation(f, x, e, digits) is not None:
            return e
    raise JoinFailure(f"no relation of degree <= {dmax} over a field of degree {f.degree}")


def field_join(gens, digits=DEFAULT_DIGITS, base=None, dmax=DEFAULT_DMAX):
    """Smallest field containing ``base`` (default Q) and every generator.

    Generators already in the running field are skipped; others extend the
    tower by their relative degree.  The result has no primitive element
    yet unless nothing was added.
    """
    f = base if base is not None else rationals()
    for g in gens:
        e = relative_degree(f, g, digits, dmax)
        if e > 1:
            f = NumberField(f.generators + [(g, e)])
        elif f.theta is not None:
            f = NumberField(list(f.generators), f.theta, list(f.expressions))
    return f


def _recognized_pool(candidates, dmax, digits):
    """``(minpoly, low, high)`` for each candidate recognised within ``dmax``."""
    out = []
    for x in candidates:
        lo, hi = _split(x, digits)
        try:
            p = recognize_minpoly(lo, dmax=dmax, digits=digits, verify=hi)
        except NoRelation:
            continue
        if p.degree > 1:
            out.append((p, lo, hi))
    return out


def simplify(f, candidates=(), digits=DEFAULT_DIGITS, power_tries=POWER_BASIS_TRIES):
    """An equal field with a simpler tower and an attached primitive element.

    ``candidates`` are elements of ``f``.  They are recognised, then joined
    from the simplest up (monic first, then by degree and height) until the
    degree of ``f`` is reached; small algebraic-integer generators keep
    membership coordinates small.  If the candidates fall short, ``f``'s
    own tower is kept.  The primitive element is chosen as in
    :func:`primitive_element`.
    """
    d = f.degree
    if d == 1:
        return primitive_element(NumberField([]), (), digits)
    pool = _recognized_pool(candidates, d, digits)
    pool.sort(key=lambda t: (not t[0].is_monic, t[0].degree, t[0].height, str(t[0])))
    g = rationals()
    for p, lo, hi in pool:
        if g.degree == d:
            break
        if d % (g.degree * 2):
            continue
        e = relative_degree(g, hi, digits, dmax=d)
        if e > 1:
            g = NumberField(g.generators + [(hi, e)])
    out = NumberField(g.generators if g.degree == d else list(f.generators))
    primitive_element(out, [hi for p, lo, hi in pool if p.degree == d], digits, power_tries)
    return out


def primitive_element(f, candidates=(), digits=DEFAULT_DIGITS, power_tries=POWER_BASIS_TRIES):
    """Attach a primitive element to ``f`` (in place) and return ``f``.

    Each candidate (an element of ``f``) whose degree equals ``[f:Q]`` is a
    primitive element, and the simplest minimal polynomial wins: monic
    first, then lowest height.  Without such a candidate,
    ``g_1 + c g_2 + c^2 g_3 + ...`` is tried for ``c`` in
    :data:`JOIN_COEFFS`.  The first ``power_tries`` choices are also tested
    for writing every generator in their power basis; the first that passes
    becomes ``theta`` with the power basis adopted.

    Raises
    ------
    JoinFailure
        If no primitive element is found within :data:`JOIN_RETRIES` tries.
    """
    d = f.degree
    if d == 1:
        f.theta, f.expressions = rational(0), []
        return f
    found = [(p, lo) for p, lo, hi in _recognized_pool(candidates, d, digits) if p.degree == d]
    found.sort(key=lambda t: _simplicity(t[0]))
    if not found:
        vals = [_source_value(g, 2 * digits + 20) for g, _ in f.generators]
        for c in JOIN_COEFFS[:JOIN_RETRIES]:
            with mp.workdps(2 * digits + 20):
                hi = mpmath.fsum(c ** k * v for k, v in enumerate(vals))
            pool = _recognized_pool([(hi, hi)], d, digits)
            if pool and pool[0][0].degree == d:
                found.append(pool[0][:2])
                break
    if not found:
        raise JoinFailure(f"no primitive element found for a field of degree {d}")

    def element(p, lo):
        with mp.workdps(digits + 20):
            return AlgebraicNumber(p, _newton_polish(p, lo, digits))

    for p, lo in found[:power_tries]:
        theta = element(p, lo)
        cand = NumberField(list(f.generators), theta)
        exprs = []
        for g, _ in f.generators:
            c = _tower_relation(cand, g, 1, digits, "power")
            if c is None:
                break
            exprs.append(Coordinates((Fraction(-c[k], c[d]) for k in range(d)), "power"))
        else:
            f.theta, f.expressions = theta, exprs
            return f
    f.theta, f.expressions = element(*found[0]), []
    return f


def _simplicity(p):
    """Sort key preferring monic, then low-height, minimal polynomials."""
    return (not p.is_monic, p.height, str(p))


def same_field(f1, f2, digits=DEFAULT_DIGITS):
    """Equal subfields of C: equal degree and each generator lies in the other field."""
    if f1.degree != f2.degree:
        return False
    return (all(contains(f2, g, digits) is not None for g, _ in f1.generators)
            and all(contains(f1, g, digits) is not None for g, _ in f2.generators))
