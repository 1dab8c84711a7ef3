import hashlib

import numpy as np

SEED_BITS = 64


def purpose_key(tag: str) -> int:
    """
    Stable 64-bit key for a purpose tag, identical across processes and Python hash seeds.
    :param tag: Purpose of the stream, e.g. "gnp" or "flip-pair"
    :return: Unsigned 64-bit integer
    """
    return int.from_bytes(hashlib.blake2b(tag.encode(), digest_size=8).digest(), byteorder="big")


def seed_sequence(seed: int, tag: str, index: int = 0) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, purpose_key(tag), index])


def derive_rng(seed: int, tag: str, index: int = 0) -> np.random.Generator:
    """
    Per-purpose random stream as a pure function of (seed, tag, index).
    :param seed: Master or trial seed
    :param tag: Purpose of the stream
    :param index: Trial or sub-stream index
    :return: numpy Generator
    """
    return np.random.default_rng(seed_sequence(seed, tag, index))


def derive_seed(seed: int, tag: str, index: int = 0) -> int:
    """
    Derives a 64-bit child seed, used to hand each Monte Carlo trial its own reproducible seed.
    :param seed: Master seed
    :param tag: Purpose of the child seed
    :param index: Trial index
    :return: Unsigned 64-bit integer
    """
    state = seed_sequence(seed, tag, index).generate_state(1, dtype=np.uint64)
    return int(state[0])
