"""Counter-based random streams keyed by experiment coordinates.

Every random draw in a simulation is taken from a Philox generator whose key
is derived from ``(master_seed, *coordinates)``.  Two runs that ask for the
same coordinates get the same numbers no matter in which order, or in which
process, the requests happen.  The Monte Carlo engine keys streams by
``(point, block, round, link, purpose)`` which also gives common random
numbers across topologies: the S-D channel of trial ``i`` in round ``r`` is
identical whether the scenario is DT, SRC or MRC.
"""

from __future__ import annotations

import numpy as np

__all__ = ["LINK_IDS", "StreamFactory", "as_streams"]

# Stable integer ids; part of the determinism contract, never renumber.
LINK_IDS = {
    "sd": 0,
    "sr1": 1,
    "r1d": 2,
    "sr2": 3,
    "r2d": 4,
    "ds": 5,
    "inject": 6,
}


class StreamFactory:
    """Derives independent :class:`numpy.random.Generator` objects from keys.

    Parameters
    ----------
    seed : int
        Master seed (unsigned 64-bit).
    prefix : tuple of int
        Coordinates already bound to this factory (see :meth:`child`).
    """

    def __init__(self, seed: int, prefix: tuple[int, ...] = ()):
        if seed < 0:
            raise ValueError("seed must be non-negative")
        self.seed = int(seed)
        self.prefix = tuple(int(p) for p in prefix)

    def child(self, *key: int) -> "StreamFactory":
        return StreamFactory(self.seed, self.prefix + tuple(int(k) for k in key))

    def generator(self, *key: int) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=self.prefix + tuple(int(k) for k in key))
        return np.random.Generator(np.random.Philox(ss))

    def __eq__(self, other):
        return isinstance(other, StreamFactory) and (self.seed, self.prefix) == (other.seed, other.prefix)

    def __repr__(self):
        return f"StreamFactory(seed={self.seed}, prefix={self.prefix})"


def as_streams(rng) -> StreamFactory:
    """Coerce an int seed, a Generator or a StreamFactory to a StreamFactory.

    A Generator is consumed once (one 63-bit draw) to seed the factory, so a
    caller holding a seeded Generator still gets reproducible results.
    """
    if isinstance(rng, StreamFactory):
        return rng
    if isinstance(rng, np.random.Generator):
        return StreamFactory(int(rng.integers(0, 2**63 - 1)))
    if isinstance(rng, (int, np.integer)):
        return StreamFactory(int(rng))
    raise TypeError(f"cannot build random streams from {type(rng).__name__}")
