"""Compensated summation helpers.

Series sweeps accumulate millions of float terms whose cancellation matters
at the 1e-9 level, so plain running sums are not good enough.  Two tools:

* ``fsum_complex`` wraps math.fsum (exact, order-independent) for one-shot
  complex sums.
* ``checkpoint_sums`` walks a term array in ascending index order and
  reports compensated partial sums at requested checkpoints.  The value at
  a checkpoint depends only on the term prefix, never on which other
  checkpoints were requested, so re-running with more checkpoints
  reproduces earlier ones bit for bit.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

__all__ = ["Neumaier", "checkpoint_sums", "fsum_complex"]

_BLOCK = 4096


class Neumaier:
    """Running compensated (Neumaier) accumulator for real floats."""

    __slots__ = ("total", "comp")

    def __init__(self) -> None:
        self.total = 0.0
        self.comp = 0.0

    def add(self, term: float) -> None:
        t = self.total + term
        if abs(self.total) >= abs(term):
            self.comp += (self.total - t) + term
        else:
            self.comp += (term - t) + self.total
        self.total = t

    def value(self) -> float:
        return self.total + self.comp

    def peek_with(self, term: float) -> float:
        """Value after adding ``term``, without mutating the state."""
        t = self.total + term
        if abs(self.total) >= abs(term):
            c = self.comp + ((self.total - t) + term)
        else:
            c = self.comp + ((term - t) + self.total)
        return t + c


def fsum_complex(values: Iterable[complex]) -> complex:
    """Exactly rounded sum of complex values (fsum on each component)."""
    re: list[float] = []
    im: list[float] = []
    for v in values:
        z = complex(v)
        re.append(z.real)
        im.append(z.imag)
    return complex(math.fsum(re), math.fsum(im))


def _real_checkpoint_sums(terms: np.ndarray, checkpoints: Sequence[int]) -> list[float]:
    # Fixed-size blocks are fsum'd exactly; block totals feed a Neumaier
    # chain.  A checkpoint mid-block adds the exact partial-block fsum to a
    # copy of the chain state.  Block boundaries are fixed, so checkpoint
    # values are independent of the checkpoint set.
    acc = Neumaier()
    out: list[float] = []
    data = terms.tolist()
    n = len(data)
    block_end = 0
    it = iter(sorted(checkpoints))
    cp = next(it, None)
    while cp is not None and cp <= n:
        while block_end + _BLOCK <= cp:
            acc.add(math.fsum(data[block_end : block_end + _BLOCK]))
            block_end += _BLOCK
        if cp == block_end:
            out.append(acc.value())
        else:
            out.append(acc.peek_with(math.fsum(data[block_end:cp])))
        cp = next(it, None)
    if cp is not None:
        raise ValueError(f"checkpoint {cp} beyond term array of length {n}")
    return out


def checkpoint_sums(terms: np.ndarray, checkpoints: Sequence[int]) -> list[complex]:
    """Compensated prefix sums of ``terms[:cp]`` for each checkpoint cp.

    ``terms`` may be real or complex; checkpoints count terms (1-based
    prefix lengths) and must be <= len(terms).
    """
    cps = sorted(int(c) for c in checkpoints)
    if np.iscomplexobj(terms):
        re = _real_checkpoint_sums(np.ascontiguousarray(terms.real), cps)
        im = _real_checkpoint_sums(np.ascontiguousarray(terms.imag), cps)
        return [complex(a, b) for a, b in zip(re, im)]
    re = _real_checkpoint_sums(np.asarray(terms, dtype=np.float64), cps)
    return [complex(a, 0.0) for a in re]
