from __future__ import annotations
import numpy as np

# Deterministic randomness for a run.
# Every stochastic source gets its own numpy Generator spawned from one SeedSequence,
# so extra draws from one source never shift the draws of another.
# Draws are pre-generated in blocks; a block refill only depends on its own substream.

_BLOCK_SIZE = 4096

class Substream:
    """One named source of randomness with block-buffered scalar draws."""
    name:str
    _gen:np.random.Generator
    _uniforms:np.ndarray
    _u_pos:int
    _poissons:np.ndarray
    _p_pos:int
    _p_lam:float|None

    def __init__(self, name:str, seed_seq:np.random.SeedSequence):
        self.name = name
        self._gen = np.random.Generator(np.random.PCG64(seed_seq))
        self._uniforms = np.empty(0)
        self._u_pos = 0
        self._poissons = np.empty(0, dtype=np.int64)
        self._p_pos = 0
        self._p_lam = None

    def uniform(self) -> float:
        """Uniform draw on [0, 1)."""
        if self._u_pos >= len(self._uniforms):
            self._uniforms = self._gen.random(_BLOCK_SIZE)
            self._u_pos = 0
        u = self._uniforms[self._u_pos]
        self._u_pos += 1
        return float(u)

    def integer(self, n:int) -> int:
        """Uniform integer on [0, n-1]."""
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}.")
        return min(int(self.uniform() * n), n - 1)

    def bernoulli(self, p:float) -> bool:
        return self.uniform() < p

    def poisson(self, lam:float) -> int:
        if lam <= 0.0:
            return 0
        if lam != self._p_lam or self._p_pos >= len(self._poissons):
            self._poissons = self._gen.poisson(lam, _BLOCK_SIZE)
            self._p_pos = 0
            self._p_lam = lam
        k = self._poissons[self._p_pos]
        self._p_pos += 1
        return int(k)

    def choice(self, probabilities:np.ndarray) -> int:
        """Samples an index from a probability vector by inverse cdf."""
        cdf = np.cumsum(probabilities)
        idx = int(np.searchsorted(cdf, self.uniform() * cdf[-1], side="right"))
        return min(idx, len(probabilities) - 1)


class RngStream:
    """Independent substreams for arrivals, backoff draws, exploration, and the decoding
    outcomes of each user.

    The two users decode from separate substreams, so the secondary's outcome sequence does
    not depend on how many packets the primary sent (runs at different arrival rates share it).
    """
    seed:int
    arrivals:Substream
    backoff:Substream
    primary_decode:Substream
    secondary_decode:Substream
    exploration:Substream

    def __init__(self, seed:int):
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}.")
        self.seed = seed
        arrivals, backoff, primary_decode, secondary_decode, exploration = np.random.SeedSequence(seed).spawn(5)
        self.arrivals = Substream("arrivals", arrivals)
        self.backoff = Substream("backoff", backoff)
        self.primary_decode = Substream("primary_decode", primary_decode)
        self.secondary_decode = Substream("secondary_decode", secondary_decode)
        self.exploration = Substream("exploration", exploration)
