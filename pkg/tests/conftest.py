import functools

import numpy as np
import pytest

from zassenhaus.cartan import canonical_frame
from zassenhaus.ffla import GF, Subspace
from zassenhaus.rmod import character_module, ideal_module, trivial_module
from zassenhaus.uea import induced_module


class World:
    """Frame, standard modules and P(mu) for one n, built on demand."""

    def __init__(self, n: int):
        self.n = n
        self.ctx = GF(2, n)
        self.frame = canonical_frame(n, self.ctx)
        self.W = self.frame.wbar
        self.T = self.frame.t0_algebra()
        self.B = self.frame.borel_algebra()

    def span(self, idx):
        return Subspace.span(self.ctx, [self.W.basis_vector(i) for i in idx], self.W.dim)

    @functools.cached_property
    def F(self):
        return trivial_module(self.W)

    @functools.cached_property
    def L(self):
        return ideal_module(self.W, self.span(self.frame.derived), name="L")

    @functools.cached_property
    def Wmod(self):
        return ideal_module(self.W, self.span(self.frame.witt), name="W")

    @functools.lru_cache(maxsize=None)
    def P(self, mu):
        return induced_module(self.W, self.T, character_module(self.T, mu))


@functools.lru_cache(maxsize=None)
def world(n: int) -> World:
    return World(n)


@pytest.fixture(scope="session")
def w1():
    return world(1)


@pytest.fixture(scope="session")
def w2():
    return world(2)


@pytest.fixture(scope="session")
def w3():
    return world(3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@functools.lru_cache(maxsize=None)
def registry_run(n: int, seed: int = 0):
    """One full registry run per (n, seed), shared between test modules."""
    from zassenhaus.verify import run_checks

    return tuple(run_checks(n, seed=seed))
