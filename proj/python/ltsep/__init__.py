"""LT and LTT separability of regular languages."""

import json

from . import _core
from ._core import (
    BudgetExceeded,
    ParseError,
    equivalent,
    gen_parity,
    gen_random,
    gen_sat,
    gen_threshold_family,
    normalize_spec,
    profile_width_bound,
    profiles,
    run_cli,
)

__all__ = [
    "BudgetExceeded",
    "ParseError",
    "decide",
    "equivalent",
    "gen_parity",
    "gen_random",
    "gen_sat",
    "gen_threshold_family",
    "normalize_spec",
    "profile_width_bound",
    "profiles",
    "run_cli",
    "threshold_bound",
]


def decide(spec, problem="ltt", k=None, d=None, emit_separator=False):
    """Decide separability of the two languages of a spec document.

    Returns the verdict as a dict with the same layout as ``ltsep decide --json``.
    """
    return json.loads(_core.decide(spec, problem, k, d, emit_separator))


def threshold_bound(k, alphabet_size, n):
    """Exact (|A_k|·n)^|A_k| as a Python int."""
    return int(_core.threshold_bound(k, alphabet_size, n))
