"""Commensurability invariants of polyhedral reflection groups.

The invariant trace field is computed from its definition: traces of
squares of orientation-preserving elements are sampled, recognised as
algebraic numbers, and joined into a single number field.  The sampling
radius grows until the field stops changing.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import mpmath
from mpmath import mp

from . import algebraic as alg
from . import lorentz
from .errors import Indeterminate, NoRelation, Unstabilized

START_LEN = 4
MAX_LEN = 12
# per-round cap on new group elements; keeps word growth bounded
MAX_ELEMENTS = 1500
# number of short elements used for the u^2 w^2 products
PAIR_POOL = 40
# short-word traces tried as primitive elements of the final field
PRIMITIVE_POOL = 60


@dataclass(frozen=True)
class TraceSample:
    word: tuple
    trace: object  # tr(w^2) at sampling precision


@dataclass(frozen=True)
class HilbertSymbol:
    a: int
    b: int
    witness: tuple  # (vertex faces, (n, m))

    def __str__(self):
        return f"({self.a}, {self.b})"


@dataclass
class InvariantReport:
    name: str
    itf: alg.NumberField
    integral_traces: bool
    non_integral_witnesses: list
    iqa: HilbertSymbol | None
    arithmetic: bool | None = None
    provenance: dict = field(default_factory=dict)

    @property
    def itf_generator_poly(self):
        return self.itf.poly

    @property
    def root(self):
        return self.itf.theta.approx

    def to_json(self):
        digits = int(self.provenance.get("digits", alg.DEFAULT_DIGITS))
        with mp.workdps(30):
            z = mpmath.mpc(self.root)
            root = [mpmath.nstr(z.real, 25, min_fixed=-30, max_fixed=30), mpmath.nstr(z.imag, 25, min_fixed=-30, max_fixed=30)]
        return {
            "name": self.name,
            "itf_poly": self.itf.poly.to_json(),
            "itf_poly_str": str(self.itf.poly),
            "itf_degree": self.itf.degree,
            "itf_field": self.itf.to_json(2 * digits + 20),
            "root": root,
            "integral_traces": self.integral_traces,
            "non_integral_witnesses": self.non_integral_witnesses,
            "iqa": None if self.iqa is None else {"symbol": [self.iqa.a, self.iqa.b],
                                                  "witness_vertex": list(self.iqa.witness[0]),
                                                  "witness_angles": list(self.iqa.witness[1])},
            "arithmetic": self.arithmetic,
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, doc):
        iqa = None
        if doc.get("iqa"):
            q = doc["iqa"]
            iqa = HilbertSymbol(q["symbol"][0], q["symbol"][1], (tuple(q["witness_vertex"]), tuple(q["witness_angles"])))
        return cls(doc["name"], alg.NumberField.from_json(doc["itf_field"]), doc["integral_traces"],
                   [tuple(w) for w in doc["non_integral_witnesses"]], iqa, doc.get("arithmetic"),
                   doc.get("provenance", {}))


# ---------------------------------------------------------------------------
# sampling


def _fingerprint(A):
    """Key identifying +-A; sign fixed by the first entry of non-negligible size."""
    entries = [A[0][0], A[0][1], A[1][0], A[1][1]]
    for e in entries:
        if abs(e) > 1e-8:
            sgn = -1 if (e.real < 0 or (abs(e.real) < 1e-8 and e.imag < 0)) else 1
            break
    return tuple((round(float(sgn * e.real), 7), round(float(sgn * e.imag), 7)) for e in entries)


def _trace_key(t):
    return (round(float(t.real), 9), round(float(t.imag), 9))


def _pair_matrices(gens):
    """``M_i conj(M_j)`` for ordered pairs ``i != j``."""
    out = {}
    for i, j in itertools.permutations(range(len(gens)), 2):
        out[(i, j)] = gens[i].compose(gens[j])
    return out


def enumerate_elements(r, max_len, max_elements=None):
    """Distinct orientation-preserving elements given by even words of length <= max_len.

    Breadth-first over words, deduplicated by group element; returns
    ``[(word, matrix)]`` in order of word length.
    """
    gens = lorentz.to_moebius_generators(r)
    with mp.workdps(r.digits + 10):
        pairs = _pair_matrices(gens)
        one = mpmath.mpc(1)
        zero = mpmath.mpc(0)
        ident = ((one, zero), (zero, one))
        seen = {_fingerprint(ident)}
        frontier = [((), ident)]
        out = []
        for length in range(2, max_len + 1, 2):
            nxt = []
            for word, A in frontier:
                for (i, j), P in pairs.items():
                    if word and word[-1] == i:
                        continue
                    B = lorentz.mat_mul(A, P)
                    key = _fingerprint(B)
                    if key in seen:
                        continue
                    seen.add(key)
                    nxt.append((word + (i, j), B))
                    if max_elements is not None and len(out) + len(nxt) >= max_elements:
                        break
                if max_elements is not None and len(out) + len(nxt) >= max_elements:
                    break
            out.extend(nxt)
            frontier = nxt
            if max_elements is not None and len(out) >= max_elements:
                break
        return out


def sample_traces(r, max_len, max_elements=MAX_ELEMENTS, pair_pool=PAIR_POOL):
    """Traces of ``w^2`` for even words ``w`` and of ``u^2 w^2`` for short ``u, w``.

    Deduplicated by numeric fingerprint; returned in a deterministic order.
    """
    elems = enumerate_elements(r, max_len, max_elements)
    out, seen = [], set()
    with mp.workdps(r.digits + 10):
        squares = []
        for word, A in elems:
            A2 = lorentz.mat_mul(A, A)
            squares.append((word, A2))
            t = lorentz.mat_trace(A2)
            k = _trace_key(t)
            if k not in seen:
                seen.add(k)
                out.append(TraceSample(word + word, t))
        short = [(w, A2) for w, A2 in squares if len(w) <= 4][:pair_pool]
        for (u, U), (w, W) in itertools.combinations(short, 2):
            t = lorentz.mat_trace(lorentz.mat_mul(U, W))
            k = _trace_key(t)
            if k not in seen:
                seen.add(k)
                out.append(TraceSample(u + u + w + w, t))
    return out


# ---------------------------------------------------------------------------
# invariant trace field


def _is_rational_integer(t, digits):
    n = mpmath.nint(t.real)
    return abs(t - n) < mpmath.mpf(10) ** (-digits) and abs(n) < 10 ** 6


def itf(r, digits=alg.DEFAULT_DIGITS, start_len=START_LEN, max_len=MAX_LEN,
        max_elements=MAX_ELEMENTS, pair_pool=PAIR_POOL):
    """Invariant trace field from sampled traces of squares.

    ``r`` should carry at least ``2*digits`` digits so every relation can be
    re-verified at doubled precision.  Returns ``(field, metadata)``.

    Raises
    ------
    Unstabilized
        If the field still changes when ``max_len`` is reached.
    """
    if r.digits < 2 * digits:
        r = lorentz.refine(r, 2 * digits + 20)
    K = alg.rationals()
    seen = set()
    stable = 0
    rounds = []
    length = start_len
    n_samples = 0
    candidates = []
    while True:
        samples = sample_traces(r, length, max_elements=max_elements, pair_pool=pair_pool)
        before = K.degree
        for s in samples:
            k = _trace_key(s.trace)
            if k in seen:
                continue
            seen.add(k)
            n_samples += 1
            if _is_rational_integer(s.trace, digits):
                continue
            if len(candidates) < PRIMITIVE_POOL:
                candidates.append(s.trace)
            if alg.contains(K, s.trace, digits) is not None:
                continue
            K = alg.field_join([s.trace], digits, base=K)
        rounds.append({"max_len": length, "samples": len(samples), "degree": K.degree})
        stable = 0 if K.degree != before else stable + 1
        if stable >= 2:
            break
        if length >= max_len:
            raise Unstabilized(f"field still growing at word length {length}")
        length += 2
    K = alg.simplify(K, candidates, digits)
    meta = {"digits": digits, "max_len": length, "samples": n_samples, "rounds": rounds,
            "stabilization_rounds": stable, "max_elements": max_elements, "pair_pool": pair_pool}
    return K, meta


# ---------------------------------------------------------------------------
# integral traces, IQA, arithmeticity


def has_integral_traces(G, digits=alg.DEFAULT_DIGITS, face_names=None):
    """Whether every Gram entry is an algebraic integer.

    ``G`` must be accurate to ``2*digits``.  Returns ``(flag, witnesses)``
    where each witness is ``(face_i, face_j, minpoly)`` for an entry whose
    minimal polynomial is not monic.

    Raises
    ------
    Indeterminate
        If some entry cannot be recognised.
    """
    n = G.rows
    names = face_names or [str(i) for i in range(n)]
    witnesses = []
    cache = {}
    for i in range(n):
        for j in range(i + 1, n):
            x = G[i, j]
            key = round(float(x), 12)
            if key in cache:
                p = cache[key]
            else:
                with mp.workdps(digits + 20):
                    lo = +mpmath.mpf(x)
                try:
                    p = alg.recognize_minpoly(lo, digits=digits, verify=x, dmax=alg.DEFAULT_DMAX)
                except NoRelation as exc:
                    raise Indeterminate(f"Gram entry ({names[i]}, {names[j]}) not recognised") from exc
                cache[key] = p
            if not alg.is_algebraic_integer(p):
                witnesses.append((names[i], names[j], p))
    return not witnesses, witnesses


def iqa_symbol(p, field_=None):
    """``(-1, -1)`` when some vertex has two edges with angles pi/n, pi/m, n, m >= 3."""
    for t in p.vertices:
        ns = [p.angle(a, b) for a, b in itertools.combinations(t, 2)]
        big = sorted(n for n in ns if n >= 3)
        if len(big) >= 2:
            return HilbertSymbol(-1, -1, (t, tuple(big[:2])))
    return None


def is_arithmetic(report):
    """Integral traces, one complex place, and IQA ``(-1, -1)``.

    Raises
    ------
    Indeterminate
        If the IQA shape is unknown.
    """
    if report.iqa is None:
        raise Indeterminate("arithmeticity test needs the (-1, -1) quaternion algebra")
    r1, r2 = report.itf.poly.signature()
    return bool(report.integral_traces and r2 == 1)


@dataclass(frozen=True)
class Verdict:
    distinguished: bool
    reason: str = ""

    def __str__(self):
        return f"Distinguished({self.reason})" if self.distinguished else "Unknown"


def commensurability_verdict(a, b, digits=alg.DEFAULT_DIGITS):
    if a.integral_traces != b.integral_traces:
        return Verdict(True, "integral-trace mismatch")
    if not alg.same_field(a.itf, b.itf, digits):
        return Verdict(True, "invariant trace fields differ")
    return Verdict(False)


def compute_report(name, r, digits=alg.DEFAULT_DIGITS, max_len=MAX_LEN, **kw):
    """Full invariant pipeline for one realized polyhedron."""
    if r.digits < 2 * digits + 20:
        r = lorentz.refine(r, 2 * digits + 20)
    K, meta = itf(r, digits=digits, max_len=max_len, **kw)
    G = lorentz.gram(r)
    integral, wit = has_integral_traces(G, digits, list(r.poly.faces))
    iqa = iqa_symbol(r.poly, K)
    rep = InvariantReport(name, K, integral, [(a, b, str(p)) for a, b, p in wit], iqa, provenance=meta)
    try:
        rep.arithmetic = is_arithmetic(rep)
    except Indeterminate:
        rep.arithmetic = None
    return rep
