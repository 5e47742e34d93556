"""Counter-seeded xoshiro256** streams for reproducible parallel Monte Carlo.

Stream k of a run with master seed S is seeded by four successive outputs
of a splitmix64 generator started at  S + (k+1) * 0x9E3779B97F4A7C15  (the
golden-gamma increment).  That split function is the documented contract:
the same (seed, index) pair always yields the same stream, on any platform
and for any thread count.
"""

import numpy as np
from numba import njit, uint64

_GOLDEN = uint64(0x9E3779B97F4A7C15)
_U53 = 1.0 / 9007199254740992.0     # 2**-53


@njit(cache=True)
def _splitmix64(x):
    x = uint64(x) + _GOLDEN
    z = x
    z = (z ^ (z >> uint64(30))) * uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> uint64(27))) * uint64(0x94D049BB133111EB)
    return x, z ^ (z >> uint64(31))


@njit(cache=True)
def stream_state(master_seed, index):
    """Initial xoshiro256** state for trajectory `index` under `master_seed`."""
    state = np.empty(4, dtype=np.uint64)
    x = uint64(master_seed) + (uint64(index) + uint64(1)) * _GOLDEN
    for i in range(4):
        x, out = _splitmix64(x)
        state[i] = out
    if state[0] | state[1] | state[2] | state[3] == uint64(0):
        state[0] = _GOLDEN      # all-zero state is the lone invalid one
    return state


@njit(cache=True)
def _rotl(x, k):
    return (x << k) | (x >> (uint64(64) - k))


@njit(cache=True)
def next_u64(state):
    result = _rotl(state[1] * uint64(5), uint64(7)) * uint64(9)
    t = state[1] << uint64(17)
    state[2] ^= state[0]
    state[3] ^= state[1]
    state[1] ^= state[2]
    state[0] ^= state[3]
    state[2] ^= t
    state[3] = _rotl(state[3], uint64(45))
    return result


@njit(cache=True)
def uniform(state):
    """Uniform double in [0, 1) with 53 random bits."""
    return (next_u64(state) >> uint64(11)) * _U53


class Stream:
    """Thin Python view of one kernel RNG stream (same bits as the kernel)."""

    def __init__(self, master_seed, index=0):
        self.state = stream_state(master_seed, index)

    def uniform(self):
        return uniform(self.state)

    def symmetric(self):
        """Uniform in [-1, 1)."""
        return 2.0 * uniform(self.state) - 1.0
