"""Input validation helpers used by the estimator-style classes."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyOrders, KNonPositive, KTooLarge


def check_texts(texts: Iterable, name: str = "texts") -> list[str]:
    """Materialize an iterable of strings, rejecting non-string items."""
    out = list(texts)
    for item in out:
        if not isinstance(item, str):
            raise TypeError(f"{name} must contain strings, got {type(item).__name__}")
    return out


def check_vector(values, dim: int | None = None) -> np.ndarray:
    """Coerce to a 1-D float64 array, optionally enforcing a dimension."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {arr.shape[0]}")
    return arr


def check_matrix(values, dim: int | None = None) -> np.ndarray:
    """Coerce to a 2-D float64 array of row vectors."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise DimensionMismatch(f"expected row dimension {dim}, got {arr.shape[1]}")
    return arr


def check_same_dimension(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[-1] != b.shape[-1]:
        raise DimensionMismatch(
            f"vector dimensions differ: {a.shape[-1]} vs {b.shape[-1]}"
        )


def check_ngram_orders(orders: Iterable[int]) -> tuple[int, ...]:
    """Validate and canonicalize n-gram orders: non-empty, all >= 1, sorted."""
    out = sorted(set(int(n) for n in orders))
    if not out:
        raise EmptyOrders("ngram orders must be non-empty")
    if out[0] < 1:
        raise EmptyOrders("ngram orders must all be >= 1")
    return tuple(out)


def check_cluster_count(k: int, n_points: int) -> int:
    k = int(k)
    if k < 1:
        raise KNonPositive(f"k must be >= 1, got {k}")
    if k > n_points:
        raise KTooLarge(f"k={k} exceeds number of points {n_points}")
    return k


def check_positive_int(value: int, name: str) -> int:
    value = int(value)
    if value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value}")
    return value


def check_unit_interval(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be within [0, 1], got {value}")
    return value


def check_sequence_nonempty(seq: Sequence, name: str) -> Sequence:
    if len(seq) == 0:
        raise ValueError(f"{name} must be non-empty")
    return seq
