"""Cached realize/refine/report pipeline shared by the CLI and the table harness.

Results are stored as JSON under a cache directory.  The cache key covers
the combinatorics, the precision settings, the word-length cap and the
solver seed, so a hit is always the result the same computation would
produce; hits are returned byte for byte.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

from . import algebraic as alg
from . import invariants, lorentz

log = logging.getLogger(__name__)

SOLVE_DIGITS = 50
CACHE_VERSION = 1
DEFAULT_CACHE = ".mhcache"


def _key(kind, **fields):
    blob = json.dumps({"kind": kind, "version": CACHE_VERSION, **fields}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


class Pipeline:
    """Realizations and invariant reports with an optional on-disk cache."""

    def __init__(self, cache_dir=DEFAULT_CACHE, seed=lorentz.SOLVER_SEED):
        self.cache_dir = Path(cache_dir) if cache_dir is not None else None
        self.seed = seed

    def _path(self, kind, name, key):
        return self.cache_dir / f"{kind}-{name}-{key}.json"

    def _load(self, path):
        if self.cache_dir is not None and path.exists():
            log.debug("cache hit %s", path)
            return path.read_text()
        return None

    def _store(self, path, text):
        if self.cache_dir is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(text)
        os.replace(tmp, path)

    def realization_text(self, name, poly, digits):
        """Archive JSON of ``poly`` realized and refined to ``digits``."""
        key = _key("realize", poly=poly.to_text(), digits=digits, solve=SOLVE_DIGITS, seed=self.seed)
        path = self._path("realize", name, key) if self.cache_dir is not None else None
        text = self._load(path) if path else None
        if text is None:
            r = lorentz.realize(poly, min(digits, SOLVE_DIGITS), seed=self.seed)
            if digits > r.digits:
                r = lorentz.refine(r, digits)
            text = r.dumps()
            if path:
                self._store(path, text)
        return text

    def realization(self, name, poly, digits):
        return lorentz.RealizedPolyhedron.from_archive(json.loads(self.realization_text(name, poly, digits)))

    def report_text(self, name, poly, digits=alg.DEFAULT_DIGITS, max_len=invariants.MAX_LEN):
        """Invariant report JSON for ``poly`` at recognition precision ``digits``."""
        key = _key("report", poly=poly.to_text(), digits=digits, max_len=max_len, solve=SOLVE_DIGITS,
                   seed=self.seed)
        path = self._path("report", name, key) if self.cache_dir is not None else None
        text = self._load(path) if path else None
        if text is None:
            r = self.realization(name, poly, 2 * digits + 20)
            rep = invariants.compute_report(name, r, digits=digits, max_len=max_len)
            text = json.dumps(rep.to_json(), indent=1, sort_keys=True)
            if path:
                self._store(path, text)
        return text

    def report(self, name, poly, digits=alg.DEFAULT_DIGITS, max_len=invariants.MAX_LEN):
        return invariants.InvariantReport.from_json(json.loads(self.report_text(name, poly, digits, max_len)))
