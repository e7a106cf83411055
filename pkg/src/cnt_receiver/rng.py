"""Counter-based Gaussian draws addressed by ``(seed, stream, index)``.

Algorithm (fixed, relied on by the reproducibility tests):

* Philox-4x64-10 as shipped by numpy, keyed with ``[seed, stream]`` and
  started at counter zero. Draw ``i`` is the ``i``-th 64-bit word of the raw
  output, i.e. lane ``i % 4`` of counter block ``i // 4``.
* The top 53 bits map to the open interval (0, 1) as ``(w >> 11) + 0.5``
  scaled by ``2**-53``.
* Gaussian draws apply the inverse normal CDF (``scipy.special.ndtri``).

A draw therefore depends only on its address, never on how many values were
requested before it, so trials can be split across workers freely.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

NOISE_STREAM = 0
SYMBOL_STREAM = 1
PATH_STREAM = 2

_MASK64 = (1 << 64) - 1


def _raw_words(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    if start < 0 or count < 0:
        raise ValueError("start and count must be nonnegative")
    bitgen = np.random.Philox(key=np.array([seed & _MASK64, stream & _MASK64], dtype=np.uint64))
    block, lane = divmod(start, 4)
    if block:
        bitgen.advance(block)
    words = bitgen.random_raw(lane + count)
    return np.asarray(words, dtype=np.uint64)[lane:]


def uniforms(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Uniform draws on (0, 1) at indices ``start .. start + count - 1``."""
    w = _raw_words(seed, stream, start, count)
    return ((w >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def normals(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Standard normal draws at indices ``start .. start + count - 1``."""
    return ndtri(uniforms(seed, stream, start, count))


def normal(seed: int, stream: int, index: int) -> float:
    return float(normals(seed, stream, index, 1)[0])


def bits(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Fair bits (0/1) taken from the top bit of each word."""
    return (_raw_words(seed, stream, start, count) >> np.uint64(63)).astype(np.int8)
