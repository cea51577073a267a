"""Input validation helpers in the spirit of ``sklearn.utils.validation``."""
from __future__ import annotations

import numbers

import numpy as np
from sklearn.exceptions import NotFittedError


def check_vectors(X, n_features: int | None = None) -> list[tuple[int, ...]]:
    """Coerce a 2-d array-like of integers to a list of int tuples.

    Floats are accepted only when integral; object arrays keep arbitrary
    precision.
    """
    if isinstance(X, np.ndarray):
        rows = X.tolist() if X.ndim == 2 else ([X.tolist()] if X.ndim == 1 else None)
    else:
        rows = [list(r) for r in X]
    if rows is None:
        raise ValueError("expected a 2-d array of vectors")
    out = []
    for r in rows:
        vec = []
        for v in r:
            if isinstance(v, numbers.Integral):
                vec.append(int(v))
            elif isinstance(v, numbers.Real) and float(v).is_integer():
                vec.append(int(v))
            else:
                raise ValueError(f"non-integral coordinate {v!r}")
        out.append(tuple(vec))
    if n_features is not None and any(len(r) != n_features for r in out):
        raise ValueError(f"expected vectors of length {n_features}")
    return out


def check_fitted(estimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise NotFittedError(f"{type(estimator).__name__} is not fitted yet; call fit first")
