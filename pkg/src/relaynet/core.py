"""Deterministic shift-channel algebra over GF(2).

A level vector is a uint8 array whose last axis holds the ``q`` signal
levels, ordered top (MSB, index 0) to bottom (LSB, index q-1).  Leading
axes are treated as a batch, so the same functions simulate one message
pattern or thousands at once.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np


class DimensionError(ValueError):
    """Level vectors disagree on their number of levels."""


class GainExceedsAmbientError(ValueError):
    """A channel gain is larger than the ambient level count."""


def level_vector(bits: Sequence[int] | np.ndarray, q: int | None = None) -> np.ndarray:
    """Validate ``bits`` and return them as a read-only uint8 level vector."""
    arr = np.array(bits, dtype=np.int64)
    if arr.ndim == 0:
        raise DimensionError("a level vector needs at least one axis")
    if q is not None and arr.shape[-1] != q:
        raise DimensionError(f"expected {q} levels, got {arr.shape[-1]}")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("level vector entries must be 0 or 1")
    out = arr.astype(np.uint8)
    out.flags.writeable = False
    return out


def zeros(q: int, batch: tuple[int, ...] = ()) -> np.ndarray:
    return np.zeros(batch + (q,), dtype=np.uint8)


def shift_apply(x: np.ndarray, n: int, q: int) -> np.ndarray:
    """Apply ``S^(q-n)``: the top ``n`` levels of ``x`` land on the bottom ``n``."""
    x = np.asarray(x, dtype=np.uint8)
    if x.shape[-1] != q:
        raise DimensionError(f"vector has {x.shape[-1]} levels, ambient q is {q}")
    if n < 0:
        raise ValueError(f"negative gain {n}")
    if n > q:
        raise GainExceedsAmbientError(f"gain {n} exceeds ambient q={q}")
    out = np.zeros_like(x)
    if n:
        out[..., q - n:] = x[..., :n]
    return out


def superpose(vs: Iterable[np.ndarray], q: int | None = None) -> np.ndarray:
    """Componentwise XOR.  An empty input needs ``q`` and yields all zeros."""
    vs = [np.asarray(v, dtype=np.uint8) for v in vs]
    if not vs:
        if q is None:
            raise DimensionError("ambient q is required to superpose an empty list")
        return zeros(q)
    width = vs[0].shape[-1]
    if q is not None and width != q:
        raise DimensionError(f"vectors have {width} levels, ambient q is {q}")
    if any(v.shape[-1] != width for v in vs):
        raise DimensionError("cannot superpose vectors of different lengths")
    out = vs[0].copy()
    for v in vs[1:]:
        out = out ^ v
    return out


def receive(transmits: Mapping[object, np.ndarray], gains: Mapping[object, int], q: int) -> np.ndarray:
    """Received signal ``sum_k S^(q - n_k) x_k`` for one receiver."""
    if set(transmits) != set(gains):
        raise KeyError("transmit and gain maps must cover the same nodes")
    return superpose((shift_apply(transmits[k], gains[k], q) for k in transmits), q=q)
