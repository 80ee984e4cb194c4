"""Python access to the cyclic dynamical system toolkit."""

import json
from fractions import Fraction

from . import _cyclic
from ._cyclic import CyclicError

__all__ = [
    "CyclicError",
    "analyze",
    "catalan",
    "catalan_bounded",
    "catalan_prime",
    "cone_exact",
    "predicted_level_fraction",
    "predicted_periodic_fraction",
    "run_cli",
    "sample_uniform",
    "scale",
    "simulate",
    "vr",
]

TICKS_PER_TURN = 1 << 64


def _fraction(pair):
    return Fraction(int(pair[0]), int(pair[1]))


def sample_uniform(n, seed, index=0):
    """n sorted uniform positions, as ticks of 2^-64 turns, from stream (seed, index)."""
    return _cyclic.sample_uniform(n, seed, index)


def scale(r):
    """Parse a scale such as "1/3" or "fixed:0.618"."""
    return json.loads(_cyclic.scale_json(str(r)))


def analyze(ticks, r, i_max=64):
    """Map, level histogram, orbit data and (for rational r) swiftness types."""
    return json.loads(_cyclic.analyze(list(ticks), str(r), i_max))


def vr(ticks, r):
    return json.loads(_cyclic.vr(list(ticks), str(r)))


def simulate(n, r, trials, seed, i_max=64, workers=1, rows=True):
    """Experiment document, as produced by `cyclic simulate`."""
    return json.loads(_cyclic.simulate(n, str(r), trials, seed, i_max, workers, rows))


def catalan(i):
    return int(_cyclic.catalan(i))


def catalan_bounded(i, h):
    return int(_cyclic.catalan_bounded(i, h))


def catalan_prime(i, h):
    return int(_cyclic.catalan_prime(i, h))


def predicted_level_fraction(i, r):
    return _fraction(_cyclic.predicted_level_fraction(i, str(r)))


def predicted_periodic_fraction(r):
    return _fraction(_cyclic.predicted_periodic_fraction(str(r)))


def cone_exact(family, i, q=None):
    return _fraction(_cyclic.cone_exact(family, i, q))


def run_cli(*args):
    """Run the command-line tool in process; returns (exit code, stdout, stderr)."""
    return tuple(_cyclic.run_cli([str(a) for a in args]))
