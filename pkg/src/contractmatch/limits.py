"""Size bounds for exhaustive scans.

Every exhaustive checker refuses universes larger than a configured bound
instead of silently taking minutes.  Bounds can be raised (or lowered) per
process through environment variables, or per call through the ``max_n``
argument the checkers accept.

Environment variables:

* ``CONTRACTMATCH_EXHAUSTIVE_BOUND`` -- scans in the ``2**n * n`` class
  (contraction, rejection consistency, money monotonicity, full-mode
  stability).  Default 12.
* ``CONTRACTMATCH_PAIRWISE_BOUND`` -- scans in the ``3**n`` / ``4**n`` class
  (substitutes, path independence).  Default 10.
* ``CONTRACTMATCH_ORACLE_BOUND`` -- the ``2**n`` stable-agreement catalog
  enumeration.  Default 16.
"""

from __future__ import annotations

import os

EXHAUSTIVE_DEFAULT = 12
PAIRWISE_DEFAULT = 10
ORACLE_DEFAULT = 16

_ENV_PREFIX = "CONTRACTMATCH"


def _from_env(name: str, default: int) -> int:
    raw = os.environ.get(f"{_ENV_PREFIX}_{name}")
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        return default


def exhaustive_bound() -> int:
    """Bound for 2**n * n scans."""
    return _from_env("EXHAUSTIVE_BOUND", EXHAUSTIVE_DEFAULT)


def pairwise_bound() -> int:
    """Bound for 3**n and 4**n subset-pair scans."""
    return _from_env("PAIRWISE_BOUND", PAIRWISE_DEFAULT)


def oracle_bound() -> int:
    """Bound for the 2**n stable-agreement enumeration."""
    return _from_env("ORACLE_BOUND", ORACLE_DEFAULT)
