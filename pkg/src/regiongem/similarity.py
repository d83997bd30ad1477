"""Chi-square distance and top-k ranking over a feature index."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from regiongem import _kernels
from regiongem.errors import ConfigMismatch, DimensionMismatch, EmptyIndex
from regiongem.features import FeatureVector

if TYPE_CHECKING:
    from regiongem.index import FeatureIndex


@dataclass(frozen=True)
class Hit:
    image_id: str
    distance: float
    class_label: str


@dataclass(frozen=True)
class RankedResult:
    """Hits ordered by ascending distance; ties broken by ascending imageId."""

    query_id: str
    hits: tuple[Hit, ...]


def _as_array(x: FeatureVector | Sequence[float] | np.ndarray) -> np.ndarray:
    if isinstance(x, FeatureVector):
        return x.values
    return np.asarray(x, dtype=np.float64)


def chi_square(x, y) -> float:
    """0.5 * sum((x_a - y_a)^2 / (x_a + y_a)); terms with x_a + y_a = 0 are 0.

    Accepts FeatureVectors or plain non-negative arrays of equal length.
    """
    xa, ya = _as_array(x), _as_array(y)
    if xa.shape != ya.shape:
        raise DimensionMismatch(f"vector lengths differ: {xa.shape} vs {ya.shape}")
    xa = np.ascontiguousarray(xa)
    matrix = np.ascontiguousarray(ya.reshape(1, -1))
    return float(_kernels.chi_square_batch(xa, matrix)[0])


def rank(
    query: FeatureVector, index: "FeatureIndex", k: int, query_id: str = "query"
) -> RankedResult:
    """Linear chi-square scan of the whole index, ascending, truncated to k."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not index.entries:
        raise EmptyIndex("index has no entries")
    if query.config != index.config:
        raise ConfigMismatch(
            f"query bins {query.config} do not match index bins {index.config}"
        )
    distances = _kernels.chi_square_batch(
        np.ascontiguousarray(query.values), index.feature_matrix()
    )
    entries = index.entries
    order = sorted(range(len(entries)), key=lambda i: (distances[i], entries[i].image_id))
    hits = tuple(
        Hit(entries[i].image_id, float(distances[i]), entries[i].class_label)
        for i in order[: min(k, len(entries))]
    )
    return RankedResult(query_id=query_id, hits=hits)
