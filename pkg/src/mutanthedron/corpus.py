"""Named polyhedra built from half-polyhedra, and the expected Table-1 data.

A name such as ``BC4m`` reads: top half ``B``, bottom half ``C``, lateral
angle ``pi/4``, mutant gluing.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources

import mpmath

from . import algebraic as alg
from . import combinat
from .errors import PolyhedronParseError

NAME_RE = re.compile(r"^(A|B|C)(A|B|C)([0-9]+)(m?)$")
CIRCUIT = ("lat_0", "lat_1", "lat_2")


@dataclass(frozen=True)
class ExpectedRow:
    pair: str
    poly: alg.IntPoly
    root: tuple  # decimal strings (re, im) as printed
    annotations: dict  # {"P": ..., "Pm": ...}
    distinguished: bool

    def annotation(self, mutant):
        return self.annotations["Pm" if mutant else "P"]

    def root_number(self, dps):
        """The printed root refined by Newton's method on ``poly`` to ``dps`` digits."""
        with mpmath.workdps(dps + 20):
            z = mpmath.mpc(mpmath.mpf(self.root[0]), mpmath.mpf(self.root[1]))
            z = alg._newton_polish(self.poly, z, dps + 10)
            return alg.AlgebraicNumber(self.poly, z)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    top: str
    bottom: str
    q: int
    mutant: bool
    expected: ExpectedRow | None = None

    @property
    def pair(self):
        return self.name.rstrip("m")

    @property
    def offset(self):
        return 1 if self.mutant else 0

    def build(self):
        return build(self.name)


def parse_name(name):
    """Split a polyhedron name into ``(top, bottom, q, mutant)``."""
    m = NAME_RE.match(name)
    if not m:
        raise PolyhedronParseError(f"{name!r} is not a polyhedron name like 'AA5' or 'BC4m'")
    return m.group(1), m.group(2), int(m.group(3)), m.group(4) == "m"


def build(name):
    top, bottom, q, mutant = parse_name(name)
    h1, h2 = combinat.build_half(top, q), combinat.build_half(bottom, q)
    return combinat.glue(h1, h2, 1 if mutant else 0)


def circuit(p):
    """The lateral circuit of a glued polyhedron."""
    return combinat.PrismaticCircuit(CIRCUIT, tuple(p.angle(a, b) for a, b in
                                                    ((CIRCUIT[0], CIRCUIT[1]), (CIRCUIT[1], CIRCUIT[2]),
                                                     (CIRCUIT[2], CIRCUIT[0]))))


def load_table():
    """Expected rows keyed by pair name, in table order."""
    text = resources.files("mutanthedron").joinpath("data", "table1.json").read_text()
    rows = {}
    for r in json.loads(text)["rows"]:
        rows[r["pair"]] = ExpectedRow(r["pair"], alg.IntPoly.from_descending(r["poly"]), tuple(r["root"]),
                                      {"P": r["P"], "Pm": r["Pm"]}, bool(r["distinguished"]))
    return rows


def entry(name):
    top, bottom, q, mutant = parse_name(name)
    expected = load_table().get(f"{top}{bottom}{q}")
    return CorpusEntry(name, top, bottom, q, mutant, expected)


def corpus():
    """Both members of every tabulated pair, in table order."""
    out = []
    for pair in load_table():
        out.append(entry(pair))
        out.append(entry(pair + "m"))
    return out
