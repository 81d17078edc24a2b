"""Matrix exponential, principal logarithm, logarithm branches, sym/skw split."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import densekit
from .densekit import adjoint, require_square

# An eigenvalue counts as lying on the closed negative real axis when its
# argument is within BRANCH_CUT_ANGLE of pi or its modulus is below
# BRANCH_CUT_MODULUS. The exact exclusion set has measure zero; floating
# point needs a band.
BRANCH_CUT_ANGLE = 1e-8
BRANCH_CUT_MODULUS = 1e-12

# Eigenvalue separation below which branch enumeration refuses the input
# (non-primary logarithms of defective matrices are out of scope).
EIG_SEPARATION_TOL = 1e-8


class BranchCutError(ValueError):
    """An eigenvalue lies on (or too close to) the closed negative real axis."""

    def __init__(self, eigenvalue: complex):
        self.eigenvalue = complex(eigenvalue)
        super().__init__(
            f"eigenvalue {self.eigenvalue:.6e} lies on the logarithm branch cut "
            f"(closed negative real axis)"
        )


class RepeatedEigenvalueError(ValueError):
    """Branch enumeration needs distinct eigenvalues."""


def sym_part(x: np.ndarray) -> np.ndarray:
    """Hermitian part (x* + x)/2; batched over leading axes."""
    return 0.5 * (x + adjoint(x))


def skw_part(x: np.ndarray) -> np.ndarray:
    """Skew-Hermitian part (x - x*)/2; batched over leading axes."""
    return 0.5 * (x - adjoint(x))


def expm(x: np.ndarray) -> np.ndarray:
    """Matrix exponential (scaling-and-squaring Pade, entire function)."""
    x = np.asarray(x, dtype=np.complex128)
    require_square(x)
    return scipy.linalg.expm(x)


def _check_off_branch_cut(eigenvalues: np.ndarray) -> None:
    moduli = np.abs(eigenvalues)
    args = np.angle(eigenvalues)
    bad = (moduli <= BRANCH_CUT_MODULUS) | (np.abs(np.abs(args) - np.pi) <= BRANCH_CUT_ANGLE)
    if np.any(bad):
        raise BranchCutError(eigenvalues[np.argmax(bad)])


def logm_principal(z: np.ndarray, herm_tol: float = densekit.HERMITIAN_TOL) -> np.ndarray:
    """Principal matrix logarithm: the unique log with spectrum in the strip
    -pi < Im < pi.

    Rejects input with an eigenvalue on the closed negative real axis
    (BranchCutError). Hermitian positive definite input takes an
    eigendecomposition fast path and returns an exactly Hermitian result.
    """
    z = np.asarray(z, dtype=np.complex128)
    n = require_square(z)
    if n == 1:
        val = z[0, 0]
        _check_off_branch_cut(np.array([val]))
        return np.array([[np.log(val)]])
    if densekit.is_hermitian(z, herm_tol):
        vectors, values = densekit.hermitian_eig(z, tol=max(herm_tol, 1e-10))
        if values[-1] > BRANCH_CUT_MODULUS:
            log_h = (vectors * np.log(values)) @ adjoint(vectors)
            return 0.5 * (log_h + adjoint(log_h))
        # Hermitian with a nonpositive eigenvalue sits on the cut.
        raise BranchCutError(values[-1])
    form = densekit.schur_decompose(z)
    _check_off_branch_cut(form.eigenvalues)
    return scipy.linalg.logm(z)


@dataclass(frozen=True)
class LogBranchSet:
    """Primary logarithm branches of a diagonalizable matrix.

    ``offsets[i]`` is the integer winding vector added (times 2*pi*i) to the
    eigenvalue logarithms of ``branches[i]``; the all-zero offset entry is
    ``base``, the principal logarithm.
    """

    base: np.ndarray
    offsets: list[tuple[int, ...]]
    branches: list[np.ndarray]

    def __len__(self) -> int:
        return len(self.branches)


def log_branches(z: np.ndarray, max_winding: int) -> LogBranchSet:
    """Enumerate primary logarithm branches with per-eigenvalue winding
    indices |k_i| <= max_winding.

    Requires distinct eigenvalues (separation above EIG_SEPARATION_TOL
    relative to the spectral scale) and none on the branch cut.
    """
    z = np.asarray(z, dtype=np.complex128)
    n = require_square(z)
    if max_winding < 0:
        raise ValueError("max_winding must be >= 0")
    eigenvalues, vectors = np.linalg.eig(z)
    _check_off_branch_cut(eigenvalues)
    scale = 1.0 + float(np.max(np.abs(eigenvalues)))
    if n > 1:
        gaps = np.abs(eigenvalues[:, None] - eigenvalues[None, :])
        min_gap = float(np.min(gaps[~np.eye(n, dtype=bool)]))
        if min_gap <= EIG_SEPARATION_TOL * scale:
            raise RepeatedEigenvalueError(
                f"eigenvalue separation {min_gap:.3e} too small for branch "
                f"enumeration (threshold {EIG_SEPARATION_TOL * scale:.3e})"
            )
    inv_vectors = np.linalg.inv(vectors)
    principal = np.log(eigenvalues)
    offsets: list[tuple[int, ...]] = []
    branches: list[np.ndarray] = []
    base: np.ndarray | None = None
    for k in itertools.product(range(-max_winding, max_winding + 1), repeat=n):
        shifted = principal + 2j * np.pi * np.asarray(k)
        branch = (vectors * shifted) @ inv_vectors
        offsets.append(k)
        branches.append(branch)
        if all(ki == 0 for ki in k):
            base = branch
    assert base is not None
    return LogBranchSet(base=base, offsets=offsets, branches=branches)
