"""Gradient verification suite.

Two independent routes are compared everywhere: the analytic backward passes
of :mod:`cvnn_bench.nn`, and the central finite-difference cogradient oracle
of :mod:`cvnn_bench.wirtinger`.  Random points keep a margin away from the
non-smooth loci (ReLU component kinks, |z| = 0) where the subgradient
convention makes the comparison meaningless.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import nn
from .wirtinger import (
    CogradientPair,
    autodiff_convention_check,
    complex_gradient,
    numeric_param_cogradient,
    numeric_wirtinger,
)

__all__ = [
    "GradCheckReport",
    "model_gradient_error",
    "run_gradient_check_suite",
    "activation_primitive_errors",
    "convention_gap",
    "run_convention_suite",
]

KINK_MARGIN = 1e-3

ACTIVATION_KINDS = (
    nn.type_a("relu"),
    nn.type_a("sigmoid"),
    nn.type_a("tanh"),
    nn.type_b("relu"),
    nn.type_b("sigmoid"),
    nn.type_b("tanh"),
    nn.LINEAR,
)


@dataclass
class GradCheckReport:
    pairs: int
    tolerance: float
    max_error_by_kind: dict[str, float] = field(default_factory=dict)
    worst_error: float = 0.0

    @property
    def passed(self) -> bool:
        return self.worst_error <= self.tolerance

    def record(self, kind: str, err: float):
        self.max_error_by_kind[kind] = max(self.max_error_by_kind.get(kind, 0.0), err)
        self.worst_error = max(self.worst_error, err)

    def lines(self) -> list[str]:
        out = [f"gradient check over {self.pairs} (model, batch) pairs, tolerance {self.tolerance:g}"]
        for kind in sorted(self.max_error_by_kind):
            out.append(f"  {kind:<28s} max relative error {self.max_error_by_kind[kind]:.3e}")
        out.append(f"  overall: {self.worst_error:.3e} -> {'PASS' if self.passed else 'FAIL'}")
        return out


def _margins_ok(model: nn.Model, cache: nn.ForwardCache) -> bool:
    """Reject configurations with pre-activations too close to a kink."""
    for ls, z in zip(model.spec.layers, cache.pre_acts):
        if ls.activation.family == "softmax_magnitude" or (
            ls.activation.family in ("type_a", "type_b") and ls.activation.inner == "relu"
        ):
            if np.iscomplexobj(z):
                if ls.activation.family == "type_a":
                    if min(np.abs(z.real).min(), np.abs(z.imag).min()) < KINK_MARGIN:
                        return False
                elif np.abs(z).min() < KINK_MARGIN:
                    return False
            elif np.abs(z).min() < KINK_MARGIN:
                return False
    return True


def model_gradient_error(
    model: nn.Model,
    batch: np.ndarray,
    labels: np.ndarray,
    masks=None,
    h: float = 1e-5,
) -> dict[str, float]:
    """Max relative error of analytic (dW, db) vs finite differences, per layer.

    The error is normalized by the largest numeric gradient entry of the
    whole model, so arrays that are legitimately ~0 (dead ReLU paths) do not
    divide by noise.
    """
    training = masks is not None and any(m is not None for m in masks)

    def loss() -> float:
        probs, _ = nn.forward(model, batch, training=training, masks=masks)
        return nn.cross_entropy(probs, labels)

    _, cache = nn.forward(model, batch, training=training, masks=masks)
    analytic = nn.backward(model, cache, labels)
    numeric = []
    for layer in model.layers:
        nw = complex_gradient(numeric_param_cogradient(loss, layer.W, h=h))
        nb = complex_gradient(numeric_param_cogradient(loss, layer.b, h=h))
        numeric.append((nw, nb))
    scale = max(
        max(np.abs(nw).max(), np.abs(nb).max()) for nw, nb in numeric
    )
    scale = max(scale, 1e-10)
    errors: dict[str, float] = {}
    n_layers = len(model.layers)
    for li, ((aw, ab), (nw, nb)) in enumerate(zip(analytic, numeric)):
        role = "output" if li == n_layers - 1 else "hidden"
        act = model.spec.layers[li].activation.label
        errors[f"{role} W ({act})"] = float(np.abs(aw - nw).max() / scale)
        errors[f"{role} b ({act})"] = float(np.abs(ab - nb).max() / scale)
    return errors


def _random_check_case(rng: np.random.Generator, two_hidden: bool, dropout: float):
    """Small random classification model + batch, resampled away from kinks."""
    for _ in range(50):
        n_in = int(rng.integers(2, 6))
        hidden = [int(rng.integers(2, 8))]
        if two_hidden:
            hidden.append(int(rng.integers(2, 6)))
        n_classes = int(rng.integers(2, 4))
        spec = nn.mlp_spec(
            "complex",
            n_in,
            hidden,
            n_classes=n_classes,
            dropout_rate=dropout,
            seed=int(rng.integers(0, 2**31)),
        )
        model = nn.build_model(spec)
        b = int(rng.integers(1, 5))
        batch = rng.normal(size=(b, n_in)) + 1j * rng.normal(size=(b, n_in))
        labels = np.zeros((b, n_classes))
        labels[np.arange(b), rng.integers(0, n_classes, size=b)] = 1.0
        masks = None
        if dropout > 0:
            masks = [
                nn.dropout_mask(ls.dropout_rate, (b, ls.output_size), rng)
                if ls.dropout_rate > 0
                else None
                for ls in spec.layers
            ]
        _, cache = nn.forward(model, batch, training=masks is not None, masks=masks)
        if _margins_ok(model, cache):
            return model, batch, labels, masks
    raise RuntimeError("could not sample a kink-free check case")


def run_gradient_check_suite(
    n_pairs: int = 100, seed: int = 2024, tolerance: float = 1e-5
) -> GradCheckReport:
    """Criterion-level suite: 1HL and 2HL complex models vs the FD oracle."""
    rng = np.random.default_rng(seed)
    report = GradCheckReport(pairs=n_pairs, tolerance=tolerance)
    for i in range(n_pairs):
        model, batch, labels, masks = _random_check_case(
            rng, two_hidden=bool(i % 2), dropout=0.5 if i % 3 == 0 else 0.0
        )
        for kind, err in model_gradient_error(model, batch, labels, masks).items():
            report.record(kind, err)
    return report


def _margin_points(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random complex points with both components and the modulus >= margin."""
    pts = np.empty(n, dtype=np.complex128)
    got = 0
    while got < n:
        cand = rng.normal(size=2 * n) + 1j * rng.normal(size=2 * n)
        ok = (np.abs(cand.real) > KINK_MARGIN) & (np.abs(cand.imag) > KINK_MARGIN)
        take = cand[ok][: n - got]
        pts[got : got + take.size] = take
        got += take.size
    return pts


def activation_primitive_errors(
    n_points: int = 100, seed: int = 7, h: float = 1e-5
) -> dict[str, float]:
    """Analytic activation cogradients vs numeric_wirtinger, per activation.

    Applies the scalar oracle to Re(u) and Im(u) separately and recombines,
    covering both du/dz and du/dzbar.  Returns max relative error per kind.
    """
    rng = np.random.default_rng(seed)
    out: dict[str, float] = {}
    for kind in ACTIVATION_KINDS:
        pts = _margin_points(rng, n_points)
        a_dz, a_dzbar = nn.activation_wirtinger(kind, pts)
        worst = 0.0
        for i, z0 in enumerate(pts):
            def part(selector):
                return lambda w: float(
                    selector(nn.activate(kind, np.array([[w]], dtype=np.complex128))[0, 0])
                )

            pre = numeric_wirtinger(part(lambda u: u.real), complex(z0), h=h)
            pim = numeric_wirtinger(part(lambda u: u.imag), complex(z0), h=h)
            n_dz = complex(pre.d_z) + 1j * complex(pim.d_z)
            n_dzbar = complex(pre.d_zbar) + 1j * complex(pim.d_zbar)
            scale = max(abs(n_dz), abs(n_dzbar), 1e-6)
            worst = max(
                worst,
                abs(a_dz[i] - n_dz) / scale,
                abs(a_dzbar[i] - n_dzbar) / scale,
            )
        out[kind.label] = float(worst)
    return out


def _real_loss_pairs(rng: np.random.Generator, n_points: int):
    """Analytic cogradient pairs of real-valued losses built from each primitive.

    For L = alpha*Re(u) + beta*Im(u) both cogradients are assembled from the
    independently derived (du/dz, du/dzbar); the softmax cross-entropy and
    MSE primitives carry their own independent d/dz and d/dzbar formulas.
    """
    for kind in ACTIVATION_KINDS:
        z = _margin_points(rng, n_points)
        du_dz, du_dzbar = nn.activation_wirtinger(kind, z)
        alpha, beta = rng.normal(size=2)
        dre_dz = 0.5 * (du_dz + np.conjugate(du_dzbar))
        dre_dzbar = 0.5 * (du_dzbar + np.conjugate(du_dz))
        dim_dz = (du_dz - np.conjugate(du_dzbar)) / 2j
        dim_dzbar = (du_dzbar - np.conjugate(du_dz)) / 2j
        yield kind.label, CogradientPair(
            d_z=alpha * dre_dz + beta * dim_dz,
            d_zbar=alpha * dre_dzbar + beta * dim_dzbar,
        )
    z = _margin_points(rng, n_points).reshape(-1, 2)
    labels = np.zeros((z.shape[0], 2))
    labels[:, 0] = 1.0
    _, pair = nn.softmax_xent_cogradient(z, labels)
    yield "softmax_xent", pair
    pred = _margin_points(rng, n_points)
    target = _margin_points(rng, n_points)
    _, pair = nn.mse_loss(pred, target)
    yield "mse", pair


def convention_gap(pair: CogradientPair) -> float:
    """Max |Eq.(2-style) - Eq.(6-style) gradient| for one cogradient pair."""
    return float(np.abs(complex_gradient(pair) - autodiff_convention_check(pair)).max())


def run_convention_suite(n_points: int = 100, seed: int = 11) -> dict[str, float]:
    """Gradient-convention agreement across the primitive suite (real losses)."""
    rng = np.random.default_rng(seed)
    return {name: convention_gap(pair) for name, pair in _real_loss_pairs(rng, n_points)}
