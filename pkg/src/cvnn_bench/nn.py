"""Complex-valued and real-valued fully connected feed-forward networks.

Conventions
-----------
* Batches are row-major: one sample per row, so a dense layer computes
  ``X @ W + b``.
* Complex models hold ``complex128`` weights; real-field models hold
  ``float64`` weights (their imaginary parts are identically zero and are
  materialized only on save).
* Hidden activations are Type-A (a real activation applied independently to
  real and imaginary parts) or Type-B (a real activation applied to the
  magnitude, phase kept linear).  The output layer is a magnitude softmax
  feeding cross-entropy.
* Backpropagation carries dL/dzbar; the update direction handed to SGD is
  the complex gradient 2*dL/dzbar, so ``W -= lr * grad`` steps along
  steepest descent.  For real-field models this reduces to ordinary real
  backprop with the plain real activation.

Non-smooth conventions (documented, gradient checks keep a margin away from
them): ReLU derivative is 0 at 0, and the derivative of |z| at z = 0 is 0.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import ctensor
from .ctensor import ShapeError
from .wirtinger import CogradientPair

__all__ = [
    "ActivationKind",
    "type_a",
    "type_b",
    "LINEAR",
    "SOFTMAX_MAGNITUDE",
    "LayerSpec",
    "ModelSpec",
    "DenseLayer",
    "Model",
    "TrainConfig",
    "History",
    "mlp_spec",
    "HIDDEN_PRESETS",
    "init_glorot_uniform",
    "build_model",
    "activate",
    "activation_wirtinger",
    "softmax_magnitude",
    "cross_entropy",
    "softmax_xent_cogradient",
    "mse_loss",
    "dropout_mask",
    "forward",
    "backward",
    "sgd_step",
    "train",
    "evaluate",
    "parameter_count",
    "real_parameter_count",
    "save_model",
    "load_model",
]

CROSS_ENTROPY_EPS = 1e-12

# ---------------------------------------------------------------------------
# real scalar activations


def _relu(x):
    return np.maximum(x, 0.0)


def _relu_deriv(x):
    return (x > 0).astype(np.float64)


def _sigmoid(x):
    # 0.5*(1 + tanh(x/2)) is the overflow-free form
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(x, dtype=np.float64)))


def _sigmoid_deriv(x):
    s = _sigmoid(x)
    return s * (1.0 - s)


def _tanh_deriv(x):
    t = np.tanh(x)
    return 1.0 - t * t


_REAL_ACTIVATIONS = {
    "relu": (_relu, _relu_deriv),
    "sigmoid": (_sigmoid, _sigmoid_deriv),
    "tanh": (np.tanh, _tanh_deriv),
}


# ---------------------------------------------------------------------------
# activation kinds


@dataclass(frozen=True)
class ActivationKind:
    """Tagged activation: type_a / type_b / linear / softmax_magnitude."""

    family: str
    inner: str = ""

    def __post_init__(self):
        if self.family not in ("type_a", "type_b", "linear", "softmax_magnitude"):
            raise ValueError(f"unknown activation family {self.family!r}")
        if self.family in ("type_a", "type_b"):
            if self.inner not in _REAL_ACTIVATIONS:
                raise ValueError(f"unknown real activation {self.inner!r}")
        elif self.inner:
            raise ValueError(f"{self.family} takes no inner activation")

    @property
    def label(self) -> str:
        return f"{self.family}_{self.inner}" if self.inner else self.family


def type_a(inner: str) -> ActivationKind:
    return ActivationKind("type_a", inner)


def type_b(inner: str) -> ActivationKind:
    return ActivationKind("type_b", inner)


LINEAR = ActivationKind("linear")
SOFTMAX_MAGNITUDE = ActivationKind("softmax_magnitude")


# ---------------------------------------------------------------------------
# specs and model containers


@dataclass(frozen=True)
class LayerSpec:
    input_size: int
    output_size: int
    activation: ActivationKind
    dropout_rate: float = 0.0

    def __post_init__(self):
        if self.input_size < 1 or self.output_size < 1:
            raise ValueError(f"layer sizes must be >= 1, got {self}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError(f"dropout_rate must be in [0, 1), got {self.dropout_rate}")


@dataclass(frozen=True)
class ModelSpec:
    field_kind: str  # 'complex' or 'real'
    layers: tuple[LayerSpec, ...]
    seed: int = 0

    def __post_init__(self):
        if self.field_kind not in ("complex", "real"):
            raise ValueError(f"field_kind must be 'complex' or 'real', got {self.field_kind!r}")
        layers = tuple(self.layers)
        if not layers:
            raise ValueError("a model needs at least one layer")
        for a, b in zip(layers, layers[1:]):
            if a.output_size != b.input_size:
                raise ValueError(f"layer sizes do not chain: {a.output_size} -> {b.input_size}")
        if layers[-1].activation.family != "softmax_magnitude":
            raise ValueError("final layer activation must be softmax_magnitude")
        object.__setattr__(self, "layers", layers)

    @property
    def is_complex(self) -> bool:
        return self.field_kind == "complex"

    @property
    def input_size(self) -> int:
        return self.layers[0].input_size

    @property
    def output_size(self) -> int:
        return self.layers[-1].output_size


@dataclass
class DenseLayer:
    W: np.ndarray  # input_size x output_size
    b: np.ndarray  # 1 x output_size


@dataclass
class Model:
    spec: ModelSpec
    layers: list[DenseLayer]


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 300
    batch_size: int = 100
    learning_rate: float = 0.01
    shuffle_each_epoch: bool = True
    rng_seed: int = 0

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")


@dataclass
class History:
    train_loss: list[float] = field(default_factory=list)
    train_accuracy: list[float] = field(default_factory=list)
    test_loss: list[float] = field(default_factory=list)
    test_accuracy: list[float] = field(default_factory=list)


HIDDEN_PRESETS = {"1HL": (64,), "2HL": (100, 40)}


def mlp_spec(
    field_kind: str,
    input_size: int,
    hidden_sizes: Sequence[int],
    n_classes: int = 2,
    dropout_rate: float = 0.5,
    hidden_activation: str = "relu",
    seed: int = 0,
) -> ModelSpec:
    """Classification MLP spec: Type-A hidden layers + magnitude-softmax output.

    Dropout applies after the activation of hidden layers only.
    """
    sizes = [input_size, *hidden_sizes, n_classes]
    layers = []
    for i in range(len(sizes) - 1):
        last = i == len(sizes) - 2
        layers.append(
            LayerSpec(
                input_size=sizes[i],
                output_size=sizes[i + 1],
                activation=SOFTMAX_MAGNITUDE if last else type_a(hidden_activation),
                dropout_rate=0.0 if last else dropout_rate,
            )
        )
    return ModelSpec(field_kind=field_kind, layers=tuple(layers), seed=seed)


# ---------------------------------------------------------------------------
# initialization


def init_glorot_uniform(
    fan_in: int, fan_out: int, rng: np.random.Generator, complex_field: bool = True
) -> np.ndarray:
    """Glorot/Xavier uniform initialization.

    Real weights: U(-L, L) with L = sqrt(6/(fan_in+fan_out)), i.e.
    Var(w) = 2/(fan_in+fan_out).  Complex weights keep the same variance
    criterion for the whole weight, E|w|^2 = 2/(fan_in+fan_out), by drawing
    the real and imaginary parts independently from U(-L/sqrt(2),
    L/sqrt(2)) (real block first, then imaginary block).
    """
    if fan_in < 1 or fan_out < 1:
        raise ValueError("fan_in and fan_out must be >= 1")
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    if not complex_field:
        return rng.uniform(-limit, limit, size=(fan_in, fan_out))
    limit /= np.sqrt(2.0)
    re = rng.uniform(-limit, limit, size=(fan_in, fan_out))
    im = rng.uniform(-limit, limit, size=(fan_in, fan_out))
    return re + 1j * im


def build_model(spec: ModelSpec) -> Model:
    """Materialize weights (Glorot uniform, zero biases) from spec.seed."""
    rng = np.random.default_rng(spec.seed)
    dtype = np.complex128 if spec.is_complex else np.float64
    layers = []
    for ls in spec.layers:
        W = init_glorot_uniform(ls.input_size, ls.output_size, rng, spec.is_complex)
        b = np.zeros((1, ls.output_size), dtype=dtype)
        layers.append(DenseLayer(W=W, b=b))
    return Model(spec=spec, layers=layers)


# ---------------------------------------------------------------------------
# activations, softmax, losses


def _unit_phase(z: np.ndarray) -> np.ndarray:
    """z/|z| with the 0 -> 1 convention (phase 0 at the origin)."""
    mag = np.abs(z)
    out = np.ones_like(z)
    np.divide(z, mag, out=out, where=mag > 0)
    return out


def activate(kind: ActivationKind, z: np.ndarray) -> np.ndarray:
    """Apply an activation elementwise; real-field input uses the collapsed real form."""
    if kind.family == "linear":
        return z
    if kind.family == "softmax_magnitude":
        return softmax_magnitude(z)
    f = _REAL_ACTIVATIONS[kind.inner][0]
    if kind.family == "type_a":
        if np.iscomplexobj(z):
            return f(z.real) + 1j * f(z.imag)
        return f(z)
    # type_b: radial activation, linear phase
    return f(np.abs(z)) * _unit_phase(z)


def activation_wirtinger(kind: ActivationKind, z: np.ndarray):
    """Analytic elementwise cogradients (du/dz, du/dzbar) of an activation.

    Defined for complex input only; at the non-smooth loci (component zero
    for Type-A ReLU, |z| = 0 for Type-B) the subgradient 0 is used.
    """
    if not np.iscomplexobj(z):
        raise ValueError("activation_wirtinger expects complex input")
    if kind.family == "linear":
        return np.ones_like(z), np.zeros_like(z)
    if kind.family == "softmax_magnitude":
        raise ValueError("softmax_magnitude is not an elementwise activation")
    deriv = _REAL_ACTIVATIONS[kind.inner][1]
    if kind.family == "type_a":
        gx = deriv(z.real)
        gy = deriv(z.imag)
        return 0.5 * (gx + gy) + 0j, 0.5 * (gx - gy) + 0j
    f, df = _REAL_ACTIVATIONS[kind.inner]
    mag = np.abs(z)
    safe = np.where(mag > 0, mag, 1.0)
    radial = f(mag) / safe  # g(|z|)/|z|
    slope = df(mag)
    du_dz = np.where(mag > 0, 0.5 * (slope + radial), 0.0) + 0j
    du_dzbar = np.where(mag > 0, (z * z) / (2.0 * safe * safe) * (slope - radial), 0.0)
    return du_dz, du_dzbar


def _activation_backward(kind: ActivationKind, z_pre: np.ndarray, g_up: np.ndarray):
    """Map dL/d(activation output)bar to dL/d(pre-activation)bar."""
    if kind.family == "linear":
        return g_up
    if np.iscomplexobj(z_pre):
        du_dz, du_dzbar = activation_wirtinger(kind, z_pre)
        return np.conjugate(g_up) * du_dzbar + g_up * np.conjugate(du_dz)
    deriv = _REAL_ACTIVATIONS[kind.inner][1]
    if kind.family == "type_a":
        return g_up * deriv(z_pre)
    # real-field type_b: u = g(|x|) sign(x), du/dx = g'(|x|) away from 0
    mag = np.abs(z_pre)
    return g_up * np.where(mag > 0, deriv(mag), 0.0)


def softmax_magnitude(z: np.ndarray) -> np.ndarray:
    """Row-wise softmax of the magnitudes |z|, with max-shift stabilization.

    For real-field logits this collapses to the ordinary softmax on the raw
    (signed) values, mirroring how Type-A activations collapse to the plain
    real activation in the real-valued equivalent model.
    """
    if z.ndim != 2 or z.shape[1] < 1:
        raise ShapeError(f"softmax_magnitude needs a 2-D batch, got {z.shape}")
    logits = np.abs(z) if np.iscomplexobj(z) else z.astype(np.float64, copy=True)
    logits -= logits.max(axis=1, keepdims=True)
    e = np.exp(logits)
    return e / e.sum(axis=1, keepdims=True)


def cross_entropy(probs: np.ndarray, labels: np.ndarray) -> float:
    """Mean over the batch of -sum_k y_k ln(max(p_k, 1e-12))."""
    if probs.shape != labels.shape:
        raise ShapeError(f"probs {probs.shape} vs labels {labels.shape}")
    logp = np.log(np.maximum(probs, CROSS_ENTROPY_EPS))
    return float(np.mean(-np.sum(labels * logp, axis=1)))


def _softmax_xent_dzbar(z_logits: np.ndarray, probs: np.ndarray, labels: np.ndarray):
    """dL/dzbar of mean cross-entropy through the magnitude softmax.

    (p - y)/B against |z|, routed to z via d|z|/dzbar = z/(2|z|) (0 at 0).
    Real-field logits feed the softmax directly, so the route is the
    constant 1/2 (dx/dzbar for a real variable).
    """
    dlogit = (probs - labels) / probs.shape[0]
    if not np.iscomplexobj(z_logits):
        return 0.5 * dlogit
    mag = np.abs(z_logits)
    route = np.zeros_like(z_logits)
    np.divide(z_logits, 2.0 * mag, out=route, where=mag > 0)
    return dlogit * route


def softmax_xent_cogradient(z_logits: np.ndarray, labels: np.ndarray):
    """Loss and analytic cogradient pair of cross-entropy(softmax(|z|), y).

    d/dz and d/dzbar are derived independently (via d|z|/dz = zbar/(2|z|)
    and d|z|/dzbar = z/(2|z|)) so their conjugate symmetry is a genuine
    cross-check rather than a definition.
    """
    probs = softmax_magnitude(z_logits)
    loss = cross_entropy(probs, labels)
    dlogit = (probs - labels) / probs.shape[0]
    if not np.iscomplexobj(z_logits):
        half = 0.5 * dlogit.astype(np.complex128)
        return loss, CogradientPair(d_z=half, d_zbar=half.copy())
    mag = np.abs(z_logits)
    route_zbar = np.zeros_like(z_logits)
    np.divide(z_logits, 2.0 * mag, out=route_zbar, where=mag > 0)
    route_z = np.zeros_like(z_logits)
    np.divide(np.conjugate(z_logits), 2.0 * mag, out=route_z, where=mag > 0)
    return loss, CogradientPair(d_z=dlogit * route_z, d_zbar=dlogit * route_zbar)


def mse_loss(pred: np.ndarray, target: np.ndarray):
    """Mean |pred - target|^2 with its analytic cogradient pair.

    Provided as a loss primitive; the benchmark presets use cross-entropy.
    """
    if pred.shape != target.shape:
        raise ShapeError(f"pred {pred.shape} vs target {target.shape}")
    diff = pred.astype(np.complex128) - target
    n = diff.size
    loss = float(np.mean(np.abs(diff) ** 2))
    return loss, CogradientPair(d_z=np.conjugate(diff) / n, d_zbar=diff / n)


def dropout_mask(rate: float, shape, rng: np.random.Generator) -> np.ndarray:
    """Inverted-dropout mask: 0 with probability rate, else 1/(1-rate)."""
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
    if rate == 0.0:
        return np.ones(shape, dtype=np.float64)
    keep = rng.random(shape) >= rate
    return keep.astype(np.float64) / (1.0 - rate)


# ---------------------------------------------------------------------------
# forward / backward / update


@dataclass
class ForwardCache:
    inputs: list[np.ndarray]  # per layer: post-dropout input it consumed
    pre_acts: list[np.ndarray]  # per layer: X @ W + b
    masks: list[np.ndarray | None]  # per layer: dropout mask applied to its output
    probs: np.ndarray


def forward(
    model: Model,
    batch: np.ndarray,
    training: bool = False,
    rng: np.random.Generator | None = None,
    masks: Sequence[np.ndarray | None] | None = None,
):
    """Run the network; returns (probabilities, cache for backward).

    Dropout applies only when ``training`` is true, after hidden
    activations, with one shared mask entry per unit (a complex unit is
    dropped as a whole).  ``masks`` overrides the random draw (used by the
    finite-difference gradient oracle, which must re-evaluate the same
    stochastic network).
    """
    spec = model.spec
    if batch.ndim != 2 or batch.shape[1] != spec.input_size:
        raise ShapeError(f"batch {batch.shape} does not match input size {spec.input_size}")
    if spec.is_complex and not np.iscomplexobj(batch):
        batch = batch.astype(np.complex128)
    if not spec.is_complex and np.iscomplexobj(batch):
        raise ShapeError("real-field model fed complex input")

    a = batch
    inputs, pre_acts, out_masks = [], [], []
    probs = None
    for li, (layer, ls) in enumerate(zip(model.layers, spec.layers)):
        inputs.append(a)
        z = ctensor.add_bias_row(ctensor.matmul(a, layer.W), layer.b)
        pre_acts.append(z)
        if li == len(model.layers) - 1:
            probs = softmax_magnitude(z)
            out_masks.append(None)
            break
        a = activate(ls.activation, z)
        mask = None
        if training and ls.dropout_rate > 0.0:
            if masks is not None and masks[li] is not None:
                mask = masks[li]
            else:
                if rng is None:
                    raise ValueError("training forward with dropout needs an rng")
                mask = dropout_mask(ls.dropout_rate, a.shape, rng)
            a = a * mask
        out_masks.append(mask)
    return probs, ForwardCache(inputs=inputs, pre_acts=pre_acts, masks=out_masks, probs=probs)


def backward(model: Model, cache: ForwardCache, labels: np.ndarray):
    """Per-layer complex gradients (dW, db) = 2 * dL/d(conj param).

    ``sgd_step`` then performs W <- W - lr * dW, i.e. steepest descent on
    the real-valued cross-entropy.  For real-field models the returned
    arrays are float64 (exactly real).
    """
    spec = model.spec
    if labels.shape != cache.probs.shape:
        raise ShapeError(f"labels {labels.shape} vs probs {cache.probs.shape}")
    g = _softmax_xent_dzbar(cache.pre_acts[-1], cache.probs, labels)
    grads: list[tuple[np.ndarray, np.ndarray]] = [None] * len(model.layers)
    for li in range(len(model.layers) - 1, -1, -1):
        a_in = cache.inputs[li]
        dW = 2.0 * (np.conjugate(a_in).T @ g)
        db = 2.0 * g.sum(axis=0, keepdims=True)
        grads[li] = (dW, db)
        if li == 0:
            break
        g = g @ np.conjugate(model.layers[li].W).T
        mask = cache.masks[li - 1]
        if mask is not None:
            g = g * mask
        g = _activation_backward(spec.layers[li - 1].activation, cache.pre_acts[li - 1], g)
    return grads


def sgd_step(model: Model, grads, learning_rate: float) -> Model:
    """In-place SGD update W <- W - lr*dW, b <- b - lr*db; returns the model."""
    if len(grads) != len(model.layers):
        raise ShapeError(f"{len(grads)} gradient pairs for {len(model.layers)} layers")
    for layer, (dW, db) in zip(model.layers, grads):
        if dW.shape != layer.W.shape or db.shape != layer.b.shape:
            raise ShapeError(
                f"gradient shapes {dW.shape}/{db.shape} do not match layer {layer.W.shape}/{layer.b.shape}"
            )
        layer.W -= learning_rate * dW
        layer.b -= learning_rate * db
    return model


# ---------------------------------------------------------------------------
# training and evaluation


def _as_xy(dataset):
    """Accept a LabeledDataset-like object or an (features, labels) pair."""
    if hasattr(dataset, "features") and hasattr(dataset, "labels"):
        return dataset.features, dataset.labels
    x, y = dataset
    return x, y


def evaluate(model: Model, dataset) -> tuple[float, float]:
    """Deterministic loss and accuracy (no dropout)."""
    x, y = _as_xy(dataset)
    probs, _ = forward(model, x, training=False)
    loss = cross_entropy(probs, y)
    accuracy = float(np.mean(np.argmax(probs, axis=1) == np.argmax(y, axis=1)))
    return loss, accuracy


def train(
    spec: ModelSpec,
    train_set,
    test_set,
    config: TrainConfig,
) -> tuple[Model, History]:
    """Shuffled mini-batch SGD; deterministic given (spec.seed, config.rng_seed).

    Records train/test loss and accuracy after every epoch.  The last
    incomplete batch is used, not dropped.
    """
    x, y = _as_xy(train_set)
    n = x.shape[0]
    if n == 0:
        raise ValueError("empty training set")
    if x.shape[1] != spec.input_size:
        raise ShapeError(f"training width {x.shape[1]} != model input {spec.input_size}")
    if y.shape != (n, spec.output_size):
        raise ShapeError(f"labels {y.shape} do not match ({n}, {spec.output_size})")
    if config.batch_size > n:
        raise ValueError(f"batch_size {config.batch_size} exceeds training set size {n}")

    model = build_model(spec)
    rng = np.random.default_rng(config.rng_seed)
    history = History()
    for _ in range(config.epochs):
        order = rng.permutation(n) if config.shuffle_each_epoch else np.arange(n)
        for start in range(0, n, config.batch_size):
            rows = order[start : start + config.batch_size]
            _, cache = forward(model, x[rows], training=True, rng=rng)
            grads = backward(model, cache, y[rows])
            sgd_step(model, grads, config.learning_rate)
        tr_loss, tr_acc = evaluate(model, (x, y))
        te_loss, te_acc = evaluate(model, test_set)
        history.train_loss.append(tr_loss)
        history.train_accuracy.append(tr_acc)
        history.test_loss.append(te_loss)
        history.test_accuracy.append(te_acc)
    return model, history


# ---------------------------------------------------------------------------
# structural counts and persistence


def parameter_count(spec: ModelSpec) -> int:
    """Number of field-valued parameters (complex for CVNN, real for RVNN)."""
    return sum(ls.input_size * ls.output_size + ls.output_size for ls in spec.layers)


def real_parameter_count(spec: ModelSpec) -> int:
    """Number of real trainable scalars (2 per complex parameter)."""
    return parameter_count(spec) * (2 if spec.is_complex else 1)


_WEIGHTS_MAGIC = b"CVNNW001"


def save_model(model: Model, path) -> None:
    """Portable binary weight dump.

    Layout: 8-byte magic ``CVNNW001``; little-endian uint32 header length; a
    UTF-8 JSON header describing the spec; then for each layer W followed by
    b as row-major (re, im) float64 little-endian pairs (real-field models
    write im = 0.0).
    """
    spec = model.spec
    header = json.dumps(
        {
            "field_kind": spec.field_kind,
            "seed": spec.seed,
            "layers": [
                {
                    "input_size": ls.input_size,
                    "output_size": ls.output_size,
                    "activation": {"family": ls.activation.family, "inner": ls.activation.inner},
                    "dropout_rate": ls.dropout_rate,
                }
                for ls in spec.layers
            ],
        },
        sort_keys=True,
        separators=(",", ":"),
    ).encode()
    with open(path, "wb") as fh:
        fh.write(_WEIGHTS_MAGIC)
        fh.write(struct.pack("<I", len(header)))
        fh.write(header)
        for layer in model.layers:
            for arr in (layer.W, layer.b):
                a = arr.astype(np.complex128)
                pairs = np.empty((a.size, 2), dtype="<f8")
                pairs[:, 0] = a.real.reshape(-1)
                pairs[:, 1] = a.imag.reshape(-1)
                fh.write(pairs.tobytes())


def load_model(path) -> Model:
    """Inverse of :func:`save_model`."""
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != _WEIGHTS_MAGIC:
            raise ValueError(f"not a weight dump (magic {magic!r})")
        (hlen,) = struct.unpack("<I", fh.read(4))
        header = json.loads(fh.read(hlen).decode())
        layer_specs = tuple(
            LayerSpec(
                input_size=ls["input_size"],
                output_size=ls["output_size"],
                activation=ActivationKind(ls["activation"]["family"], ls["activation"]["inner"]),
                dropout_rate=ls["dropout_rate"],
            )
            for ls in header["layers"]
        )
        spec = ModelSpec(field_kind=header["field_kind"], layers=layer_specs, seed=header["seed"])
        layers = []
        for ls in layer_specs:
            arrs = []
            for shape in ((ls.input_size, ls.output_size), (1, ls.output_size)):
                count = shape[0] * shape[1]
                pairs = np.frombuffer(fh.read(count * 16), dtype="<f8").reshape(count, 2)
                a = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(shape)
                arrs.append(a if spec.is_complex else np.ascontiguousarray(a.real))
            layers.append(DenseLayer(W=arrs[0], b=arrs[1]))
    return Model(spec=spec, layers=layers)
