"""Exact Hilbert functions, Cayley-Bacharach tests and plane-configuration covers.

Point sets are dicts {"ambient": n, "points": [[...], ...]} with coordinates
given as ints or rational strings such as "-2/5", the same layout the
command-line tool reads.
"""

import json

from . import _cblab
from ._cblab import CbpDisagreement, InexhaustiveError, ParseError

__all__ = [
    "CbpDisagreement",
    "InexhaustiveError",
    "ParseError",
    "cbp",
    "corpus",
    "counterexample_search",
    "hf",
    "hilbert_function",
    "max_cbp_degree",
    "min_cover",
    "min_cover_dim",
    "point_set",
    "replay",
    "run_suite",
]


def point_set(points, ambient=None):
    """Builds the dict form from a list of coordinate lists."""
    rows = [[c if isinstance(c, str) else int(c) for c in p] for p in points]
    if ambient is None:
        ambient = len(rows[0]) - 1
    return {"ambient": ambient, "points": rows}


def _text(x):
    return x if isinstance(x, str) else json.dumps(x)


def hilbert_function(x):
    """Returns (values, r_X); values run from degree 0 to r_X + 1."""
    values, reg = _cblab.hilbert_function(_text(x))
    return list(values), reg


def hf(x, degree):
    return _cblab.hf(_text(x), degree)


def cbp(x, r, fast=False):
    """Dict with the common verdict and each method's answer (None when skipped)."""
    return _cblab.cbp(_text(x), r, fast)


def max_cbp_degree(x, fast=False):
    return _cblab.max_cbp_degree(_text(x), fast)


def min_cover(x, budget, limit=None):
    out = _cblab.min_cover(_text(x), budget, limit)
    return None if out is None else json.loads(out)


def min_cover_dim(x, limit=None):
    return _cblab.min_cover_dim(_text(x), limit)


def replay(provenance):
    return json.loads(_cblab.replay(_text(provenance)))


def corpus(kind, count, seed):
    return [json.loads(s) for s in _cblab.corpus(kind, count, seed)]


def counterexample_search(d, r, trials, seed, limit=None):
    return json.loads(_cblab.counterexample_search(d, r, trials, seed, limit))


def run_suite(config):
    """Report as a list of dicts; the last one is the summary."""
    return [json.loads(line) for line in _cblab.run_suite(_text(config)).splitlines()]
