"""Dense complex matrix decompositions and seeded random matrix generation.

All matrices are numpy arrays of dtype complex128 in row-major (C) order.
Decompositions are LAPACK-backed; every factorization is checked against
its reconstruction invariant by the test suite rather than trusted blindly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

# Default tolerances; every operation taking a tolerance accepts an override.
RESIDUAL_TOL = 1e-10       # relative reconstruction residual
RANK_TOL = 1e-12           # rank threshold, relative to sigma_1
HERMITIAN_TOL = 1e-12      # relative Hermiticity residual


class NotHermitianError(ValueError):
    """Input expected to be Hermitian deviates beyond tolerance."""


class RankDeficientError(ValueError):
    """Input is (numerically) rank deficient; carries the offending singular value."""

    def __init__(self, sigma_min: float, threshold: float):
        self.sigma_min = float(sigma_min)
        self.threshold = float(threshold)
        super().__init__(
            f"rank deficient: smallest singular value {sigma_min:.6e} "
            f"below threshold {threshold:.6e}"
        )


class ConvergenceError(RuntimeError):
    """An iterative decomposition failed to converge."""


def as_matrix(data, dtype=np.complex128) -> np.ndarray:
    """Validate user input as a finite 2-d complex matrix and return a copy."""
    a = np.array(data, dtype=dtype, order="C")
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got ndim={a.ndim}")
    if a.size == 0:
        raise ValueError("empty matrix")
    if not np.all(np.isfinite(a.view(np.float64))):
        raise ValueError("matrix contains non-finite entries (NaN or Inf)")
    return a


def require_square(a: np.ndarray) -> int:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a.shape[0]


def adjoint(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose, batched over leading axes."""
    return np.conj(np.swapaxes(a, -1, -2))


def hermiticity_residual(a: np.ndarray) -> float:
    """Relative deviation of a square matrix from its Hermitian part."""
    scale = max(1.0, float(np.linalg.norm(a)))
    return float(np.linalg.norm(a - adjoint(a))) / scale


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return a.shape[0] == a.shape[1] and hermiticity_residual(a) <= tol


def unitarity_residual(q: np.ndarray) -> float:
    """|| q* q - I ||_F, the orthonormal-columns defect."""
    n = q.shape[1]
    return float(np.linalg.norm(adjoint(q) @ q - np.eye(n)))


@dataclass(frozen=True)
class PolarFactors:
    """Polar decomposition z = unitary @ hermitian.

    ``unitary`` is m-by-n with orthonormal columns; ``hermitian`` is n-by-n
    Hermitian positive definite for full-column-rank input.
    """

    unitary: np.ndarray
    hermitian: np.ndarray


@dataclass(frozen=True)
class SchurForm:
    """Unitary similarity a = q @ t @ q* with t upper triangular."""

    q: np.ndarray
    t: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.diag(self.t).copy()


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD a = u @ diag(sigma) @ v* with sigma real nonnegative."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.sigma) @ adjoint(self.v)


def hermitian_eig(h: np.ndarray, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (vectors, values) with values real and sorted descending and
    vectors unitary, so that h = vectors @ diag(values) @ vectors*.
    Raises NotHermitianError when h is not Hermitian within ``tol``.
    """
    h = np.asarray(h, dtype=np.complex128)
    require_square(h)
    res = hermiticity_residual(h)
    if res > tol:
        raise NotHermitianError(
            f"matrix is not Hermitian: relative residual {res:.3e} exceeds {tol:.1e}"
        )
    values, vectors = np.linalg.eigh(0.5 * (h + adjoint(h)))
    # eigh returns ascending order; flip to descending (stable: eigh output
    # order for equal values is preserved under the reversal).
    return vectors[:, ::-1].copy(), values[::-1].copy()


def schur_decompose(a: np.ndarray) -> SchurForm:
    """Complex Schur form a = q t q* with t upper triangular."""
    a = np.asarray(a, dtype=np.complex128)
    require_square(a)
    if not np.all(np.isfinite(a.view(np.float64))):
        raise ValueError("matrix contains non-finite entries (NaN or Inf)")
    try:
        t, q = scipy.linalg.schur(a, output="complex")
    except scipy.linalg.LinAlgError as exc:  # QR iteration failure
        raise ConvergenceError(f"Schur QR iteration did not converge: {exc}") from exc
    return SchurForm(q=q, t=t)


def svd(z: np.ndarray) -> SvdFactors:
    """Thin SVD of an m-by-n matrix with m >= n, singular values descending."""
    z = np.asarray(z, dtype=np.complex128)
    m, n = z.shape
    if m < n:
        raise ValueError(f"svd requires m >= n, got shape {z.shape}")
    u, sigma, vh = np.linalg.svd(z, full_matrices=False)
    return SvdFactors(u=u, sigma=sigma, v=adjoint(vh))


def polar(z: np.ndarray, rank_tol: float = RANK_TOL) -> PolarFactors:
    """Polar decomposition z = U_p H with U_p = u v*, H = v diag(sigma) v*.

    Requires full column rank: the smallest singular value must stay above
    ``rank_tol`` times the largest.
    """
    f = svd(z)
    threshold = rank_tol * (f.sigma[0] if f.sigma[0] > 0 else 1.0)
    if f.sigma[-1] <= threshold:
        raise RankDeficientError(f.sigma[-1], threshold)
    unitary = f.u @ adjoint(f.v)
    hermitian = (f.v * f.sigma) @ adjoint(f.v)
    # Symmetrize away the last rounding bits so downstream Hermitian fast
    # paths accept the factor unconditionally.
    hermitian = 0.5 * (hermitian + adjoint(hermitian))
    return PolarFactors(unitary=unitary, hermitian=hermitian)


def random_unitary(n: int, seed, size: int | None = None) -> np.ndarray:
    """Haar-distributed unitary matrices, deterministic per seed.

    QR of a complex Gaussian matrix with the R diagonal phase-normalized.
    With ``size`` given, returns a (size, n, n) stack drawn from one stream.
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    rng = np.random.default_rng(seed)
    shape = (n, n) if size is None else (size, n, n)
    g = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    q = q * (d / np.abs(d))[..., None, :]
    return q


def random_nonsingular(n: int, log_cond: float, seed) -> np.ndarray:
    """Random matrix with condition number exp(log_cond), deterministic per seed.

    Built as U diag(sigma) V* with U, V Haar and log(sigma) spread over
    [-log_cond/2, log_cond/2]; the extreme exponents are pinned at the
    interval endpoints so the condition number is exact, interior exponents
    are uniform.
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if log_cond < 0:
        raise ValueError("log_cond must be >= 0")
    rng = np.random.default_rng(seed)
    half = 0.5 * log_cond
    if n == 1:
        exponents = np.array([0.0])
    else:
        exponents = np.concatenate(
            [[half], np.sort(rng.uniform(-half, half, size=n - 2))[::-1], [-half]]
        )
    g1 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    g2 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    u, ru = np.linalg.qr(g1)
    u = u * (np.diag(ru) / np.abs(np.diag(ru)))[None, :]
    v, rv = np.linalg.qr(g2)
    v = v * (np.diag(rv) / np.abs(np.diag(rv)))[None, :]
    return (u * np.exp(exponents)) @ adjoint(v)
