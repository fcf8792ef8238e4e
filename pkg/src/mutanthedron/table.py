"""Reproduce the mutant-pair table and compare against the expected data."""
from __future__ import annotations

import concurrent.futures as cf
import json
from dataclasses import dataclass, field

from . import algebraic as alg
from . import corpus, invariants
from .errors import MutanthedronError

MATCH, MISMATCH, INDETERMINATE = "MATCH", "MISMATCH", "INDETERMINATE"
COLUMNS = ("pair", "degree", "expected_degree", "itf", "integral", "arithmetic", "mutual_containment",
           "verdict", "expected_verdict", "status", "itf_poly")


def _status(ok):
    if ok is None:
        return INDETERMINATE
    return MATCH if ok else MISMATCH


def _annotation_flags(label):
    """``(integral, arithmetic)`` implied by an annotation label."""
    return label in ("integral", "arithmetic"), label == "arithmetic"


@dataclass
class PairResult:
    pair: str
    expected: corpus.ExpectedRow
    reports: tuple = (None, None)
    itf: str = INDETERMINATE
    integral: str = INDETERMINATE
    arithmetic: str = INDETERMINATE
    mutual: str = INDETERMINATE
    verdict: str = INDETERMINATE
    verdict_text: str = ""
    errors: list = field(default_factory=list)

    @property
    def statuses(self):
        return (self.itf, self.integral, self.arithmetic, self.mutual, self.verdict)

    @property
    def status(self):
        if all(s == MATCH for s in self.statuses):
            return MATCH
        return MISMATCH if MISMATCH in self.statuses else INDETERMINATE

    @property
    def degree(self):
        rep = self.reports[0] or self.reports[1]
        return rep.itf.degree if rep is not None else None

    def row(self):
        rep = self.reports[0] or self.reports[1]
        poly = str(rep.itf.poly) if rep is not None and rep.itf.theta is not None else ""
        return {
            "pair": self.pair,
            "degree": self.degree,
            "expected_degree": self.expected.poly.degree,
            "itf": self.itf,
            "integral": self.integral,
            "arithmetic": self.arithmetic,
            "mutual_containment": self.mutual,
            "verdict": self.verdict_text,
            "expected_verdict": "Distinguished" if self.expected.distinguished else "Unknown",
            "status": self.status,
            "itf_poly": poly,
            "errors": list(self.errors),
        }


def itf_matches(report, expected, digits):
    """Degree equality and containment of the refined printed root."""
    if report.itf.degree != expected.poly.degree:
        return False
    root = expected.root_number(2 * digits + 20)
    return alg.contains(report.itf, root, digits) is not None


def compare_pair(expected, rep_p, rep_m, digits=alg.DEFAULT_DIGITS, errors=()):
    """Fill in every status column for one pair from its two reports (either may be None)."""
    res = PairResult(expected.pair, expected, (rep_p, rep_m), errors=list(errors))
    reps = [(rep_p, False), (rep_m, True)]
    if all(r is not None for r, _ in reps):
        res.itf = _status(all(itf_matches(r, expected, digits) for r, _ in reps))
        res.integral = _status(all(r.integral_traces == _annotation_flags(expected.annotation(m))[0] for r, m in reps))
        if any(r.arithmetic is None for r, _ in reps):
            res.arithmetic = INDETERMINATE
        else:
            res.arithmetic = _status(all(r.arithmetic == _annotation_flags(expected.annotation(m))[1]
                                         for r, m in reps))
        res.mutual = _status(alg.same_field(rep_p.itf, rep_m.itf, digits))
        v = invariants.commensurability_verdict(rep_p, rep_m, digits)
        res.verdict_text = str(v)
        res.verdict = _status(v.distinguished == expected.distinguished)
    return res


def _report_texts(cache_dir, seed, pair, digits, max_len):
    """Worker: report JSON (or an error string) for both members of a pair."""
    from .pipeline import Pipeline

    pipeline = Pipeline(cache_dir, seed)
    out = []
    for name in (pair, pair + "m"):
        try:
            out.append((pipeline.report_text(name, corpus.build(name), digits, max_len), None))
        except MutanthedronError as exc:
            out.append((None, f"{name}: {type(exc).__name__}: {exc}"))
    return out


def run_table(pipeline, digits=alg.DEFAULT_DIGITS, max_len=invariants.MAX_LEN, pairs=None, jobs=1):
    """Compute and compare every pair; results follow table order whatever the completion order.

    With ``jobs > 1`` pairs run in separate processes (mpmath precision is
    process-global); comparisons always happen in the calling process.
    """
    table = corpus.load_table()
    names = [p for p in table if pairs is None or p in pairs]
    args = [(pipeline.cache_dir, pipeline.seed, p, digits, max_len) for p in names]
    if jobs <= 1:
        texts = [_report_texts(*a) for a in args]
    else:
        with cf.ProcessPoolExecutor(max_workers=jobs) as ex:
            texts = list(ex.map(_report_texts, *zip(*args)))
    results = []
    for pair, both in zip(names, texts):
        reps = [None if t is None else invariants.InvariantReport.from_json(json.loads(t)) for t, _ in both]
        errors = [e for _, e in both if e]
        results.append(compare_pair(table[pair], reps[0], reps[1], digits, errors))
    return results
