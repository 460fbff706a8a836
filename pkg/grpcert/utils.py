import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from sympy import factorint

from grpcert import config


def prime_power(n):
    """
    Split n into (p, k) with n = p^k.
    :param n: Positive integer.
    :return: (p, k), (None, 0) for n = 1, or None when n is not a prime power.
    """
    if n == 1:
        return None, 0

    factors = factorint(n)
    if len(factors) != 1:
        return None

    (p, k), = factors.items()
    return int(p), int(k)


def indices_to_bitset(indices):
    """
    Pack element indices into a Python int bitset (bit i set for element i).
    """
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size == 0:
        return 0

    flags = np.zeros(int(indices.max()) + 1, dtype=np.uint8)
    flags[indices] = 1
    packed = np.packbits(flags, bitorder="little")
    return int.from_bytes(packed.tobytes(), byteorder="little")


def bitset_to_indices(bitset, n_elements):
    """
    Unpack a Python int bitset into a sorted numpy array of element indices.
    """
    n_bytes = (n_elements + 7) // 8
    packed = np.frombuffer(bitset.to_bytes(n_bytes, byteorder="little"), dtype=np.uint8)
    flags = np.unpackbits(packed, bitorder="little")[:n_elements]
    return np.flatnonzero(flags)


def resolve_threads(threads=None):
    """
    Thread count from the argument, then the environment, then the configured default.
    """
    if threads is None:
        env_value = os.environ.get(config.threads_environment_variable)
        if env_value:
            try:
                threads = int(env_value)
            except ValueError:
                raise ValueError("Environment variable %s must be an integer, but '%s' was provided."
                                 % (config.threads_environment_variable, env_value))

    if threads is None:
        threads = config.default_threads or os.cpu_count() or 1

    if threads < 1:
        raise ValueError("Thread count cannot be less than 1, but %d was provided." % threads)

    return threads


def parallel_map(function, items, threads=1):
    """
    Map function over items, in a thread pool when threads > 1. Results keep the input order.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [function(item) for item in items]

    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(function, items))
