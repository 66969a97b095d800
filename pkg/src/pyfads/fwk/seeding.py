"""Per-(task, event) deterministic random streams."""

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64_mix(z):
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def task_event_seed(global_seed, seed_salt, event_index):
    """64-bit seed for one task processing one event.

    SplitMix64 finalizer of ``global_seed ^ salt ^ (event_index * golden_gamma)``.
    """
    z = (global_seed & MASK64) ^ (seed_salt & MASK64) ^ ((event_index * GOLDEN_GAMMA) & MASK64)
    return splitmix64_mix(z)


def make_rng(seed):
    """Counter-based generator (Philox) keyed by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=seed & MASK64))
