"""Cosine-similarity helpers shared by the embedding-based scorers."""

from __future__ import annotations

import numpy as np


def cosine_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise cosine similarities between the rows of two matrices.

    Zero rows get zero similarity everywhere rather than NaN.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("embedding matrices must be 2-D")
    if a.shape[1] != b.shape[1]:
        raise ValueError(
            f"embedding dimension mismatch: {a.shape[1]} vs {b.shape[1]}"
        )
    na = np.linalg.norm(a, axis=1)
    nb = np.linalg.norm(b, axis=1)
    na[na == 0] = 1.0
    nb[nb == 0] = 1.0
    return (a / na[:, None]) @ (b / nb[:, None]).T
