"""Python front end to the chaoscope core. Results come back as plain dicts."""

import json

from . import _core
from ._core import ConfigError, EvaluationError, ParseError, PreconditionError, __version__

__all__ = [
    "ConfigError",
    "EvaluationError",
    "ParseError",
    "PreconditionError",
    "classify",
    "classify_point",
    "default_config",
    "evaluate",
    "list_families",
    "run_cli",
    "scan_crossings",
    "tail_stats",
]


def _cfg(config):
    return "" if config is None else json.dumps(config)


def default_config():
    return json.loads(_core.default_config())


def list_families(kind="all"):
    return json.loads(_core.list_families(kind))


def evaluate(family, a, x):
    return _core.evaluate(family, str(a), float(x))


def classify(family, range, strength="weak", commensurable=False, config=None):
    return json.loads(_core.classify(family, range, strength, commensurable, _cfg(config)))


def scan_crossings(family, alpha, beta, range, config=None):
    return json.loads(_core.scan_crossings(family, str(alpha), str(beta), range, _cfg(config)))


def tail_stats(family, x, y, config=None):
    return json.loads(_core.tail_stats(family, str(x), str(y), _cfg(config)))


def classify_point(family, alpha, config=None):
    return json.loads(_core.classify_point(family, str(alpha), _cfg(config)))


def run_cli(*args):
    """Runs the command line in-process; returns (exit_code, stdout, stderr)."""
    return _core.run_cli(list(args))
