"""Non-circular complex Gaussian dataset generation and circularity statistics.

Each feature entry is an independent draw z = x + jy with (x, y) zero-mean
bivariate Gaussian: given variances (var_x, var_y) and correlation rho,

    x = sigma_x * u,   y = sigma_y * (rho * u + sqrt(1 - rho^2) * v)

with u, v independent standard normals (the lower-triangular square root of
the 2x2 covariance).  Standard normals come from an explicit Box-Muller
transform over PCG64 uniform doubles (see :func:`standard_normal_box_muller`)
so the byte-exact dataset content is pinned by the seed alone.

Second-order descriptors of Z = X + jY:

    variance        var_z = var_x + var_y
    pseudo-variance tau   = var_x - var_y + 2j*cov_xy
    quotient        tau / var_z          (0 iff second-order circular)
    correlation     rho   = cov_xy / (sigma_x * sigma_y)
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CircularityParams",
    "CircularityStats",
    "PRESETS",
    "preset_classes",
    "sweep_pair",
    "LabeledDataset",
    "standard_normal_box_muller",
    "sample_noncircular",
    "make_dataset",
    "split",
    "circularity_stats",
    "save_csv",
    "load_csv",
    "save_binary",
    "load_binary",
]


@dataclass(frozen=True)
class CircularityParams:
    """Per-class second-order parameters (var_x, var_y, rho)."""

    var_x: float
    var_y: float
    rho: float

    def __post_init__(self):
        if self.var_x < 0 or self.var_y < 0:
            raise ValueError(f"variances must be >= 0, got {self}")
        if not -1.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (-1, 1), got {self.rho}")

    @property
    def cov_xy(self) -> float:
        return self.rho * np.sqrt(self.var_x * self.var_y)

    @property
    def var_z(self) -> float:
        return self.var_x + self.var_y

    @property
    def pseudo_variance(self) -> complex:
        return complex(self.var_x - self.var_y, 2.0 * self.cov_xy)

    @property
    def circularity_quotient(self) -> complex:
        if self.var_z == 0:
            raise ValueError("circularity quotient undefined for zero total variance")
        return self.pseudo_variance / self.var_z


# Two-class presets; fields ordered (var_x, var_y, rho).
PRESETS: dict[str, tuple[CircularityParams, ...]] = {
    "A": (CircularityParams(1.0, 1.0, 0.3), CircularityParams(1.0, 1.0, -0.3)),
    "B": (CircularityParams(1.0, 2.0, 0.0), CircularityParams(2.0, 1.0, 0.0)),
    "C": (CircularityParams(1.0, 2.0, 0.3), CircularityParams(2.0, 1.0, -0.3)),
}


def preset_classes(tag: str) -> tuple[CircularityParams, ...]:
    try:
        return PRESETS[tag]
    except KeyError:
        raise ValueError(f"unknown preset {tag!r}; expected one of {sorted(PRESETS)}") from None


def sweep_pair(rho: float) -> tuple[CircularityParams, CircularityParams]:
    """Preset-A-shaped class pair with correlation (+rho, -rho)."""
    return CircularityParams(1.0, 1.0, rho), CircularityParams(1.0, 1.0, -rho)


@dataclass
class LabeledDataset:
    """Row-aligned features (n x m, complex or real) and one-hot labels (n x k)."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        if self.features.ndim != 2 or self.labels.ndim != 2:
            raise ValueError("features and labels must be 2-D")
        if self.features.shape[0] != self.labels.shape[0]:
            raise ValueError(
                f"row mismatch: {self.features.shape[0]} features vs {self.labels.shape[0]} labels"
            )

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def feature_len(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return self.labels.shape[1]

    @property
    def class_index(self) -> np.ndarray:
        return np.argmax(self.labels, axis=1)


def standard_normal_box_muller(rng: np.random.Generator, size) -> np.ndarray:
    """Standard normals via Box-Muller on uniform doubles.

    Draw order (fixed): with N = prod(size) and P = ceil(N/2) pairs, first P
    uniforms give u1 = 1 - u in (0, 1], the next P give u2; the output is
    [r*cos(2 pi u2), r*sin(2 pi u2)] with r = sqrt(-2 ln u1), concatenated,
    truncated to N, reshaped to ``size`` in C order.
    """
    shape = tuple(np.atleast_1d(size).astype(int))
    total = int(np.prod(shape))
    pairs = (total + 1) // 2
    u1 = 1.0 - rng.random(pairs)
    u2 = rng.random(pairs)
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.concatenate([r * np.cos(2.0 * np.pi * u2), r * np.sin(2.0 * np.pi * u2)])
    return z[:total].reshape(shape)


def sample_noncircular(
    params: CircularityParams, n: int, m: int, rng: np.random.Generator
) -> np.ndarray:
    """n x m matrix of i.i.d. draws from CN(0, var_z, tau) defined by ``params``."""
    if n < 1 or m < 1:
        raise ValueError(f"need n, m >= 1, got n={n}, m={m}")
    normals = standard_normal_box_muller(rng, (2, n, m))
    u, v = normals[0], normals[1]
    sx = np.sqrt(params.var_x)
    sy = np.sqrt(params.var_y)
    x = sx * u
    y = sy * (params.rho * u + np.sqrt(1.0 - params.rho**2) * v)
    return x + 1j * y


def make_dataset(
    classes, n_per_class: int, m: int = 128, rng: np.random.Generator | None = None
) -> LabeledDataset:
    """Concatenated per-class blocks with one-hot labels, then one shuffle.

    ``classes`` is a preset tag ('A'/'B'/'C') or a sequence of
    :class:`CircularityParams`.  Class blocks are generated in class order
    from the single ``rng`` stream, then the rows are permuted once.
    """
    if isinstance(classes, str):
        classes = preset_classes(classes)
    classes = tuple(classes)
    if len(classes) < 2:
        raise ValueError("need at least 2 classes")
    if n_per_class < 1:
        raise ValueError(f"n_per_class must be >= 1, got {n_per_class}")
    if rng is None:
        raise ValueError("make_dataset requires an explicit rng for reproducibility")
    k = len(classes)
    blocks = [sample_noncircular(p, n_per_class, m, rng) for p in classes]
    features = np.concatenate(blocks, axis=0)
    labels = np.zeros((k * n_per_class, k), dtype=np.float64)
    for c in range(k):
        labels[c * n_per_class : (c + 1) * n_per_class, c] = 1.0
    perm = rng.permutation(k * n_per_class)
    return LabeledDataset(features=features[perm], labels=labels[perm])


def split(dataset: LabeledDataset, train_fraction: float) -> tuple[LabeledDataset, LabeledDataset]:
    """Row-disjoint partition preserving order: first floor(n*f) rows train."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = dataset.n_samples
    cut = int(np.floor(n * train_fraction))
    if cut == 0 or cut == n:
        raise ValueError(f"split of {n} rows at {train_fraction} leaves one side empty")
    return (
        LabeledDataset(dataset.features[:cut], dataset.labels[:cut]),
        LabeledDataset(dataset.features[cut:], dataset.labels[cut:]),
    )


@dataclass(frozen=True)
class CircularityStats:
    variance: float
    pseudo_variance: complex
    quotient: complex
    rho: float


def circularity_stats(samples: np.ndarray) -> CircularityStats:
    """Sample moments about the sample mean of a complex sample vector."""
    z = np.asarray(samples, dtype=np.complex128).reshape(-1)
    if z.size < 2:
        raise ValueError(f"need at least 2 samples, got {z.size}")
    d = z - z.mean()
    variance = float(np.mean(np.abs(d) ** 2))
    if variance == 0.0:
        raise ValueError("zero sample variance; circularity statistics undefined")
    tau = complex(np.mean(d * d))
    sx = float(np.sqrt(np.mean(d.real**2)))
    sy = float(np.sqrt(np.mean(d.imag**2)))
    cov = float(np.mean(d.real * d.imag))
    rho = cov / (sx * sy) if sx > 0 and sy > 0 else 0.0
    return CircularityStats(
        variance=variance, pseudo_variance=tau, quotient=tau / variance, rho=rho
    )


# ---------------------------------------------------------------------------
# on-disk formats
#
# CSV: header re_0,im_0,...,re_{m-1},im_{m-1},label ; one row per sample;
# floats via repr (shortest round-trip), label is the class index; '.'
# decimal separator, LF line endings.
#
# Binary: magic CVDS0001; little-endian uint64 n, m, k; features as n*m
# (re, im) float64 LE pairs in row-major order; labels as n uint32 LE class
# indices.

_DATA_MAGIC = b"CVDS0001"


def _require_complex(dataset: LabeledDataset):
    if not np.iscomplexobj(dataset.features):
        raise ValueError("dataset export is defined for complex feature matrices")


def save_csv(dataset: LabeledDataset, path) -> None:
    _require_complex(dataset)
    m = dataset.feature_len
    header = ",".join(f"re_{i},im_{i}" for i in range(m)) + ",label"
    cls = dataset.class_index
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for row, label in zip(dataset.features, cls):
            cells = []
            for z in row:
                cells.append(repr(float(z.real)))
                cells.append(repr(float(z.imag)))
            cells.append(str(int(label)))
            fh.write(",".join(cells) + "\n")


def load_csv(path) -> LabeledDataset:
    with open(path, "r") as fh:
        header = fh.readline().strip().split(",")
        if header[-1] != "label" or len(header) % 2 == 0:
            raise ValueError("malformed dataset CSV header")
        m = (len(header) - 1) // 2
        feats, labels = [], []
        for line in fh:
            cells = line.strip().split(",")
            vals = np.array(cells[: 2 * m], dtype=np.float64)
            feats.append(vals[0::2] + 1j * vals[1::2])
            labels.append(int(cells[-1]))
    features = np.array(feats, dtype=np.complex128)
    k = max(labels) + 1
    onehot = np.zeros((len(labels), k), dtype=np.float64)
    onehot[np.arange(len(labels)), labels] = 1.0
    return LabeledDataset(features=features, labels=onehot)


def save_binary(dataset: LabeledDataset, path) -> None:
    _require_complex(dataset)
    n, m, k = dataset.n_samples, dataset.feature_len, dataset.n_classes
    with open(path, "wb") as fh:
        fh.write(_DATA_MAGIC)
        fh.write(struct.pack("<QQQ", n, m, k))
        pairs = np.empty((n * m, 2), dtype="<f8")
        pairs[:, 0] = dataset.features.real.reshape(-1)
        pairs[:, 1] = dataset.features.imag.reshape(-1)
        fh.write(pairs.tobytes())
        fh.write(dataset.class_index.astype("<u4").tobytes())


def load_binary(path) -> LabeledDataset:
    with open(path, "rb") as fh:
        if fh.read(8) != _DATA_MAGIC:
            raise ValueError("not a dataset binary")
        n, m, k = struct.unpack("<QQQ", fh.read(24))
        pairs = np.frombuffer(fh.read(n * m * 16), dtype="<f8").reshape(n * m, 2)
        features = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(n, m)
        cls = np.frombuffer(fh.read(n * 4), dtype="<u4")
    onehot = np.zeros((n, k), dtype=np.float64)
    onehot[np.arange(n), cls] = 1.0
    return LabeledDataset(features=features, labels=onehot)
