"""Shared helpers for the test suite."""

import numpy as np

from chanleak import Channel


def bsc(p: float) -> Channel:
    """Binary symmetric channel with crossover probability p."""
    return Channel(np.array([[1.0 - p, p], [p, 1.0 - p]]))


def random_channel(rng: np.random.Generator, n_inputs: int, n_outputs: int) -> Channel:
    """Full-support channel with Dirichlet(1) rows."""
    return Channel(rng.dirichlet(np.ones(n_outputs), size=n_inputs))
