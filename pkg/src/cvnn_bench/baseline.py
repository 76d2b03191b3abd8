"""Parametric upper-bound classifier from the known generative model.

With prior knowledge that every class is zero-mean complex Gaussian, the
pseudo-variance of a feature vector is estimated by the zero-mean moment
estimator tau_hat = mean(z_i^2) and the vector is assigned to the class
whose known pseudo-variance is nearest in the complex plane (ties go to the
lowest class index).  For two classes with opposite pseudo-variances this is
exactly a sign threshold on the projection of tau_hat onto the class value.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .datagen import CircularityParams, sample_noncircular

__all__ = ["estimate_tau", "classify_by_tau", "classify_rows", "baseline_accuracy"]


def estimate_tau(features: np.ndarray) -> complex:
    """Zero-mean ML moment estimate of the pseudo-variance: mean of z^2."""
    z = np.asarray(features, dtype=np.complex128).reshape(-1)
    if z.size == 0:
        raise ValueError("cannot estimate pseudo-variance of an empty vector")
    return complex(np.mean(z * z))


def classify_by_tau(features: np.ndarray, class_taus: Sequence[complex]) -> int:
    """Index of the class whose pseudo-variance is nearest to the estimate."""
    taus = np.asarray(class_taus, dtype=np.complex128)
    if taus.size < 2 or np.unique(taus).size < 2:
        raise ValueError("need at least 2 distinct class pseudo-variances")
    tau_hat = estimate_tau(features)
    return int(np.argmin(np.abs(tau_hat - taus)))


def classify_rows(features: np.ndarray, class_taus: Sequence[complex]) -> np.ndarray:
    """Vectorized nearest-tau classification, one decision per row."""
    taus = np.asarray(class_taus, dtype=np.complex128)
    if taus.size < 2 or np.unique(taus).size < 2:
        raise ValueError("need at least 2 distinct class pseudo-variances")
    tau_hat = np.mean(features * features, axis=1)
    return np.argmin(np.abs(tau_hat[:, None] - taus[None, :]), axis=1)


def baseline_accuracy(
    classes: Sequence[CircularityParams],
    n_per_class: int,
    m: int,
    rng: np.random.Generator,
) -> float:
    """Mean 0/1 accuracy of the nearest-tau rule on freshly generated vectors."""
    classes = tuple(classes)
    if len(classes) < 2:
        raise ValueError("need at least 2 classes")
    if n_per_class < 1:
        raise ValueError(f"n_per_class must be >= 1, got {n_per_class}")
    taus = [p.pseudo_variance for p in classes]
    correct = 0
    for ci, params in enumerate(classes):
        block = sample_noncircular(params, n_per_class, m, rng)
        correct += int(np.sum(classify_rows(block, taus) == ci))
    return correct / (n_per_class * len(classes))
