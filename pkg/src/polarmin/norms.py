"""Unitarily invariant norms as symmetric gauge functions of singular values.

Every norm here routes through the singular value vector: Frobenius and
Schatten-p are the l2/lp gauges, the spectral norm is the largest singular
value, and the Ky Fan k-norm is the sum of the k largest. The ``gauge``
function evaluates directly on (stacked) singular value arrays so batched
callers can reuse one SVD across the whole norm grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .densekit import require_square
from .matfun import skw_part, sym_part

_KINDS = ("fro", "spec", "kyfan", "schatten")


@dataclass(frozen=True)
class NormSpec:
    """Selector for a unitarily invariant norm.

    kind is one of "fro", "spec", "kyfan" (with k >= 1) or "schatten"
    (with p >= 1). The CLI text syntax is ``fro``, ``spec``, ``kyfan:<k>``,
    ``schatten:<p>``.
    """

    kind: str
    k: int | None = None
    p: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind == "kyfan":
            if self.k is None or int(self.k) != self.k or self.k < 1:
                raise ValueError("kyfan norm needs an integer k >= 1")
        elif self.kind == "schatten":
            if self.p is None or not np.isfinite(self.p) or self.p < 1:
                raise ValueError("schatten norm needs a real p >= 1")

    def __str__(self) -> str:
        if self.kind == "kyfan":
            return f"kyfan:{self.k}"
        if self.kind == "schatten":
            p = self.p
            return f"schatten:{int(p) if float(p).is_integer() else p}"
        return self.kind


def frobenius() -> NormSpec:
    return NormSpec("fro")


def spectral() -> NormSpec:
    return NormSpec("spec")


def kyfan(k: int) -> NormSpec:
    return NormSpec("kyfan", k=int(k))


def schatten(p: float) -> NormSpec:
    return NormSpec("schatten", p=float(p))


def parse_norm(text: str) -> NormSpec:
    """Parse the CLI norm syntax: fro | spec | kyfan:<k> | schatten:<p>."""
    text = text.strip().lower()
    if text == "fro":
        return frobenius()
    if text == "spec":
        return spectral()
    if text.startswith("kyfan:"):
        try:
            return kyfan(int(text.split(":", 1)[1]))
        except ValueError as exc:
            raise ValueError(f"bad kyfan norm spec {text!r}: {exc}") from None
    if text.startswith("schatten:"):
        try:
            return schatten(float(text.split(":", 1)[1]))
        except ValueError as exc:
            raise ValueError(f"bad schatten norm spec {text!r}: {exc}") from None
    raise ValueError(f"unknown norm spec {text!r}")


def norm_grid(n: int) -> list[NormSpec]:
    """The norm test grid used throughout: Frobenius, spectral, all Ky Fan
    norms up to n, and Schatten 1, 1.5, 3."""
    return (
        [frobenius(), spectral()]
        + [kyfan(k) for k in range(1, n + 1)]
        + [schatten(1.0), schatten(1.5), schatten(3.0)]
    )


@dataclass(frozen=True)
class SymSkwWeights:
    """Weights of the combined Hermitian/skew-Hermitian objective."""

    mu: float
    mu_c: float

    def __post_init__(self):
        if not (self.mu > 0):
            raise ValueError("mu must be > 0")
        if not (self.mu_c >= 0):
            raise ValueError("mu_c must be >= 0")


def singular_values(x: np.ndarray) -> np.ndarray:
    """Singular values sorted descending; batched over leading axes."""
    return np.linalg.svd(np.asarray(x, dtype=np.complex128), compute_uv=False)


def gauge(sigma: np.ndarray, spec: NormSpec) -> np.ndarray | float:
    """Symmetric gauge of a (stack of) singular value vector(s).

    ``sigma`` may be unsorted; the gauge sorts internally. For a stacked
    input of shape (..., m) the result has shape (...).
    """
    sigma = np.sort(np.abs(np.asarray(sigma, dtype=np.float64)), axis=-1)[..., ::-1]
    m = sigma.shape[-1]
    if spec.kind == "fro":
        out = np.sqrt(np.sum(sigma**2, axis=-1))
    elif spec.kind == "spec":
        out = sigma[..., 0]
    elif spec.kind == "kyfan":
        if spec.k > m:
            raise ValueError(f"kyfan k={spec.k} exceeds the number of singular values {m}")
        out = np.sum(sigma[..., : spec.k], axis=-1)
    else:  # schatten
        out = np.sum(sigma**spec.p, axis=-1) ** (1.0 / spec.p)
    return float(out) if out.ndim == 0 else out


def ui_norm(x: np.ndarray, spec: NormSpec) -> float:
    """Unitarily invariant norm of a matrix, evaluated via singular values."""
    return float(gauge(singular_values(x), spec))


def sym_skw_objective(x: np.ndarray, weights: SymSkwWeights, spec: NormSpec) -> float:
    """mu * ||sym x|| + mu_c * ||skw x|| for the given norm."""
    require_square(np.asarray(x))
    return weights.mu * ui_norm(sym_part(x), spec) + weights.mu_c * ui_norm(skw_part(x), spec)
