"""
SplitMix64 streams keyed per trial.

The generator is fixed by its increment ``GAMMA`` and the two multipliers
of its finaliser ``MIX_1`` and ``MIX_2``. Trial ``t`` of a run seeded with
``seed`` owns the stream started from
``key = mix64(seed XOR (t * GAMMA))``; word ``j`` of that stream is
``mix64(key + (j + 1) * GAMMA)``. Seed 0, trial 0 therefore yields the
reference SplitMix64 sequence for state 0.

Bit ``k`` of a stream is bit ``k % 64`` of word ``k // 64``.
"""

import numpy as np

from feilab.errors import DomainError

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MIX_1 = 0xBF58476D1CE4E5B9
MIX_2 = 0x94D049BB133111EB

_GAMMA = np.uint64(GAMMA)
_MIX_1 = np.uint64(MIX_1)
_MIX_2 = np.uint64(MIX_2)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)


def mix64(z: int) -> int:
    """The SplitMix64 finaliser on a Python integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX_1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_2) & MASK64
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _S30)) * _MIX_1
    z = (z ^ (z >> _S27)) * _MIX_2
    return z ^ (z >> _S31)


def check_seed(seed: int) -> int:
    """Reject seeds that are not unsigned 64-bit integers."""
    if not isinstance(seed, int) or not 0 <= seed <= MASK64:
        raise DomainError(f"seed must be an unsigned 64-bit int: {seed!r}")
    return seed


def trial_key(seed: int, trial: int) -> int:
    """Stream key of one trial."""
    return mix64(check_seed(seed) ^ ((trial * GAMMA) & MASK64))


def trial_keys(seed: int, trials: np.ndarray) -> np.ndarray:
    """
    Stream keys for many trials at once.

    Args:
        seed (int): Unsigned 64-bit run seed.
        trials (np.ndarray): Non-negative trial indices.

    Returns:
        np.ndarray: ``uint64`` keys, one per trial.
    """
    counters = np.atleast_1d(np.asarray(trials, dtype=np.uint64))
    return _mix64_array(np.uint64(check_seed(seed)) ^ (counters * _GAMMA))


def stream_words(keys: np.ndarray, count: int) -> np.ndarray:
    """
    The first ``count`` words of every keyed stream.

    Args:
        keys (np.ndarray): ``uint64`` stream keys, shape ``(b,)``.
        count (int): Words per stream.

    Returns:
        np.ndarray: ``uint64`` array of shape ``(b, count)``.
    """
    steps = np.arange(1, count + 1, dtype=np.uint64) * _GAMMA
    states = np.atleast_1d(keys).astype(np.uint64)[:, None] + steps[None, :]
    return _mix64_array(states)


def stream_bits(keys: np.ndarray, nbits: int) -> np.ndarray:
    """
    The first ``nbits`` bits of every keyed stream.

    Returns:
        np.ndarray: ``uint8`` array of 0/1 values, shape ``(b, nbits)``.
    """
    words = stream_words(keys, (nbits + 63) // 64)
    octets = np.ascontiguousarray(words.astype("<u8")).view(np.uint8)
    bits = np.unpackbits(octets, axis=-1, bitorder="little")
    return bits[:, :nbits]
