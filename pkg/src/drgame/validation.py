"""Input checking helpers in the spirit of ``sklearn.utils.validation``."""

from __future__ import annotations

import numpy as np

from .exceptions import LengthMismatch, ValidationError


def check_profile(values, length: int | None = None, name: str = "profile", allow_negative: bool = False) -> np.ndarray:
    """Coerce ``values`` to a finite 1-D float array and check its length."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be 1-D, got shape {arr.shape}")
    if length is not None and arr.shape[0] != length:
        raise LengthMismatch(f"{name} has {arr.shape[0]} slots, expected {length}")
    if not np.isfinite(arr).all():
        raise ValidationError(f"{name} contains non-finite values")
    if not allow_negative and (arr < 0).any():
        raise ValidationError(f"{name} contains negative values")
    return arr


def check_same_length(*arrays) -> int:
    lengths = {len(a) for a in arrays}
    if len(lengths) != 1:
        raise LengthMismatch(f"length mismatch: {sorted(lengths)}")
    return lengths.pop()


def check_weights(weights) -> tuple[float, float]:
    w_cost, w_discomfort = (float(w) for w in weights)
    if w_cost < 0 or w_discomfort < 0 or (w_cost == 0 and w_discomfort == 0):
        raise ValidationError(f"weights must be non-negative and not both zero, got {weights}")
    return w_cost, w_discomfort


def check_fitted(estimator, attribute: str) -> None:
    from sklearn.exceptions import NotFittedError

    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"This {type(estimator).__name__} instance is not fitted yet; call 'fit' first."
        )
