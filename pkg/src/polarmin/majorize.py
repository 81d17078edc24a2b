"""Majorization, compound matrices, trace inequalities for exponentials,
and the elementary-symmetric-polynomial chain they induce.

Compound matrices are built from explicit minors in lexicographic subset
order; partial compound traces always go through eigenvalues of the
compound (diagonal entries of a non-triangular compound are *not* its
eigenvalues, and partial sums taken in diagonal order are wrong in
general). Subset-product partial sums are therefore always sorted before
accumulation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import densekit, matfun
from .densekit import adjoint, require_square

MAX_COMPOUND_DIM = 8       # C(8,4) = 70 is the largest compound we build
DEFAULT_TOL = 1e-9

# A matrix counts as (upper) triangular for the eigenvalue fast path when
# its strictly lower part is negligible at this relative level.
_TRIANGULAR_TOL = 1e-14


@dataclass(frozen=True)
class MajorizationVerdict:
    """Outcome of a majorization test x ≺ y on descending rearrangements.

    ``weak`` holds when every prefix sum of x is dominated by the matching
    prefix sum of y; ``strong`` additionally requires equal totals.
    ``min_slack`` is the smallest raw prefix slack (y-prefix minus x-prefix).
    """

    prefix_sums_x: np.ndarray
    prefix_sums_y: np.ndarray
    weak: bool
    strong: bool
    min_slack: float


def majorizes(x, y, tol: float = DEFAULT_TOL) -> MajorizationVerdict:
    """Check whether x is majorized by y (x ≺ y) after sorting descending.

    Prefix inequalities pass when slack >= -tol*(1+|rhs|); the total-sum
    equality required for ``strong`` passes when |diff| <= tol*(1+|rhs|).
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    px = np.cumsum(np.sort(x)[::-1])
    py = np.cumsum(np.sort(y)[::-1])
    slack = py - px
    weak = bool(np.all(slack >= -tol * (1.0 + np.abs(py))))
    total_ok = bool(abs(px[-1] - py[-1]) <= tol * (1.0 + abs(py[-1])))
    return MajorizationVerdict(
        prefix_sums_x=px,
        prefix_sums_y=py,
        weak=weak,
        strong=weak and total_ok,
        min_slack=float(np.min(slack)),
    )


def convex_image_weak_majorization(x, y, f=np.abs, tol: float = DEFAULT_TOL) -> MajorizationVerdict:
    """Apply an elementwise convex function to a strongly majorized pair.

    Requires x ≺ y (rechecked); returns the majorization verdict for
    (f(x), f(y)), whose ``weak`` flag is the property under test.
    """
    base = majorizes(x, y, tol)
    if not base.strong:
        raise ValueError("input pair is not strongly majorized (x ≺ y required)")
    return majorizes(f(np.asarray(x, dtype=np.float64)), f(np.asarray(y, dtype=np.float64)), tol)


def _subsets(n: int, k: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(n), k)), dtype=np.intp)


def compound(a: np.ndarray, k: int) -> np.ndarray:
    """k-th compound matrix: all k-by-k minors in lexicographic subset order."""
    a = np.asarray(a, dtype=np.complex128)
    n = require_square(a)
    if n > MAX_COMPOUND_DIM:
        raise ValueError(f"compound matrices capped at n <= {MAX_COMPOUND_DIM}, got n={n}")
    if not 1 <= k <= n:
        raise ValueError(f"compound order k={k} out of range 1..{n}")
    if k == 1:
        return a.copy()
    s = _subsets(n, k)
    blocks = a[s[:, None, :, None], s[None, :, None, :]]  # (m, m, k, k) minors
    return np.linalg.det(blocks)


def _sorted_eigenvalues_by_modulus(m: np.ndarray) -> np.ndarray:
    """Eigenvalues sorted by modulus descending, ties by real then imaginary
    part descending (deterministic on symmetric test inputs)."""
    n = m.shape[0]
    strict_lower = np.tril(m, -1)
    scale = 1.0 + float(np.linalg.norm(m))
    if np.linalg.norm(strict_lower) <= _TRIANGULAR_TOL * scale:
        eigs = np.diag(m).copy()
    elif densekit.is_hermitian(m):
        eigs = np.linalg.eigvalsh(0.5 * (m + adjoint(m))).astype(np.complex128)
    else:
        eigs = densekit.schur_decompose(m).eigenvalues
    order = np.lexsort((-eigs.imag, -eigs.real, -np.abs(eigs)))
    return eigs[order]


def partial_compound_trace(a: np.ndarray, k: int, i: int) -> float:
    """Sum of the i largest-in-modulus eigenvalues of the k-th compound.

    Similarity invariant. Returns the real part of the sum; on the
    positive-definite matrices this machinery targets, the eigenvalues are
    real and positive so nothing is discarded.
    """
    c = compound(a, k)
    m = c.shape[0]
    if not 1 <= i <= m:
        raise ValueError(f"partial trace index i={i} out of range 1..{m}")
    eigs = _sorted_eigenvalues_by_modulus(c)
    return float(np.sum(eigs[:i]).real)


@dataclass(frozen=True)
class CohenEntry:
    k: int
    i: int
    lhs: float   # tr_i^k (exp(a) exp(a*))
    rhs: float   # tr_i^k (exp(a + a*))
    slack: float  # rhs - lhs, expected >= 0


@dataclass(frozen=True)
class CohenReport:
    """Slack of tr_i^k(exp(a) exp(a*)) <= tr_i^k(exp(a + a*)) for all (k, i)."""

    n: int
    tol: float
    entries: list[CohenEntry] = field(repr=False)

    @property
    def min_slack(self) -> float:
        return min(e.slack for e in self.entries)

    @property
    def max_abs_slack(self) -> float:
        return max(abs(e.slack) for e in self.entries)

    @property
    def passed(self) -> bool:
        return self.min_slack >= -self.tol

    def is_equality(self, tol: float | None = None) -> bool:
        return self.max_abs_slack <= (self.tol if tol is None else tol)


def cohen_check(a: np.ndarray, tol: float = DEFAULT_TOL) -> CohenReport:
    """Evaluate the compound-trace exponential inequality for every (k, i).

    Both comparands are Hermitian positive definite, so each compound is
    Hermitian and its partial traces are real sums of positive eigenvalues.
    For normal input every slack vanishes.
    """
    a = np.asarray(a, dtype=np.complex128)
    n = require_square(a)
    e = matfun.expm(a)
    lhs_mat = e @ adjoint(e)
    rhs_mat = matfun.expm(a + adjoint(a))
    entries: list[CohenEntry] = []
    for k in range(1, n + 1):
        lhs_eigs = _sorted_eigenvalues_by_modulus(compound(lhs_mat, k)).real
        rhs_eigs = _sorted_eigenvalues_by_modulus(compound(rhs_mat, k)).real
        lhs_sums = np.cumsum(lhs_eigs)
        rhs_sums = np.cumsum(rhs_eigs)
        for i in range(1, len(lhs_eigs) + 1):
            lhs, rhs = float(lhs_sums[i - 1]), float(rhs_sums[i - 1])
            entries.append(CohenEntry(k=k, i=i, lhs=lhs, rhs=rhs, slack=rhs - lhs))
    return CohenReport(n=n, tol=tol, entries=entries)


def log_majorization_witness(
    q: np.ndarray, d, tol: float = DEFAULT_TOL
) -> tuple[np.ndarray, MajorizationVerdict]:
    """Eigenvalues x of exp(sym log(q* diag(d))) and the majorization verdict
    for (log d) ≺ (log x).

    q must be unitary and d strictly positive; d is sorted descending
    internally. A branch-cut failure of the principal logarithm propagates.
    """
    q = np.asarray(q, dtype=np.complex128)
    n = require_square(q)
    if densekit.unitarity_residual(q) > 1e-8 * n:
        raise ValueError("q is not unitary within tolerance")
    d = np.sort(np.asarray(d, dtype=np.float64))[::-1]
    if d.shape != (n,) or np.any(d <= 0):
        raise ValueError("d must be a positive vector matching the dimension of q")
    log_m = matfun.logm_principal(adjoint(q) @ np.diag(d).astype(np.complex128))
    sym_eigs = np.linalg.eigvalsh(matfun.sym_part(log_m))
    x = np.exp(sym_eigs[::-1])
    return x, majorizes(np.log(d), np.log(x), tol)


def elem_sym_poly(v, i: int) -> float:
    """Elementary symmetric polynomial e_i of the entries of v."""
    v = np.asarray(v, dtype=np.float64)
    n = v.size
    if not 0 <= i <= n:
        raise ValueError(f"symmetric polynomial index i={i} out of range 0..{n}")
    return float(_elem_sym_all(v)[i])


def _elem_sym_all(v: np.ndarray) -> np.ndarray:
    e = np.zeros(v.size + 1)
    e[0] = 1.0
    for val in v:
        e[1:] = e[1:] + val * e[:-1]
    return e


@dataclass(frozen=True)
class SsliVerdict:
    """Outcome of the sum-of-squared-logarithms check at n=3."""

    conditions_hold: bool
    conclusion_holds: bool
    condition_slacks: np.ndarray  # e_i(y) - e_i(a), i = 1..3
    conclusion_slack: float       # sum log^2 y - sum log^2 a


def ssli_check(y, a, tol: float = DEFAULT_TOL) -> SsliVerdict:
    """Check the n=3 sum-of-squared-logarithms implication data.

    conditions: e_i(y) >= e_i(a) for i = 1, 2 and e_3 within tol;
    conclusion: sum log^2(y) >= sum log^2(a) - tol. The implication
    (conditions => conclusion) is the property callers test.
    """
    y = np.asarray(y, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    if y.shape != (3,) or a.shape != (3,):
        raise ValueError("ssli_check is defined for positive triples (n=3)")
    if np.any(y <= 0) or np.any(a <= 0):
        raise ValueError("entries must be strictly positive")
    ey = _elem_sym_all(y)[1:]
    ea = _elem_sym_all(a)[1:]
    slacks = ey - ea
    conditions = bool(
        slacks[0] >= 0.0
        and slacks[1] >= 0.0
        and slacks[2] >= -tol * (1.0 + abs(ea[2]))
    )
    lhs = float(np.sum(np.log(y) ** 2))
    rhs = float(np.sum(np.log(a) ** 2))
    conclusion = lhs >= rhs - tol * (1.0 + abs(rhs))
    return SsliVerdict(
        conditions_hold=conditions,
        conclusion_holds=conclusion,
        condition_slacks=slacks,
        conclusion_slack=lhs - rhs,
    )


def top_product_sums(values, k: int) -> np.ndarray:
    """Prefix sums of all k-fold products of ``values``, largest first.

    top_product_sums(v, k)[i-1] is the sum of the i greatest k-subset
    products; greatest-first ordering matters (diagonal/lexicographic order
    of the products is not monotone, e.g. v2*v3 may exceed v1*v4).
    """
    v = np.asarray(values, dtype=np.float64)
    n = v.size
    if not 1 <= k <= n:
        raise ValueError(f"subset size k={k} out of range 1..{n}")
    products = np.array([math.prod(c) for c in itertools.combinations(v.tolist(), k)])
    return np.cumsum(np.sort(products)[::-1])


@dataclass(frozen=True)
class ChainEntry:
    k: int
    i: int
    lhs: float   # top-i sum of k-products of y
    rhs: float   # top-i sum of k-products of a
    slack: float  # lhs - rhs, expected >= 0 (or ~0 for the k=n equality)


@dataclass(frozen=True)
class SymmetricChainReport:
    """Subset-product partial-sum dominance of y = x^2 over a = d^2."""

    x: np.ndarray
    y: np.ndarray
    a: np.ndarray
    entries: list[ChainEntry] = field(repr=False)
    det_slack: float = 0.0   # e_n(y) - e_n(a), expected ~0
    tol: float = DEFAULT_TOL

    @property
    def min_slack(self) -> float:
        return min(e.slack for e in self.entries)

    @property
    def passed(self) -> bool:
        ineq_ok = all(
            e.slack >= -self.tol * (1.0 + abs(e.rhs))
            for e in self.entries
            if not (e.k == len(self.a) and e.i == 1)
        )
        det_scale = 1.0 + abs(float(np.prod(self.a)))
        return ineq_ok and abs(self.det_slack) <= self.tol * det_scale


def symmetric_chain_entries(y, a) -> list[ChainEntry]:
    """All greatest-first subset-product partial-sum comparisons of y vs a."""
    y = np.asarray(y, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    if y.shape != a.shape or y.ndim != 1:
        raise ValueError(f"length mismatch: {y.shape} vs {a.shape}")
    n = y.size
    entries: list[ChainEntry] = []
    for k in range(1, n + 1):
        ty = top_product_sums(y, k)
        ta = top_product_sums(a, k)
        for i in range(1, ty.size + 1):
            lhs, rhs = float(ty[i - 1]), float(ta[i - 1])
            entries.append(ChainEntry(k=k, i=i, lhs=lhs, rhs=rhs, slack=lhs - rhs))
    return entries


def cohen_symmetric_chain(q: np.ndarray, d, tol: float = DEFAULT_TOL) -> SymmetricChainReport:
    """Full subset-product chain for y = x^2 against a = d^2, where x is the
    log-majorization witness of (q, d), closing with the determinant
    equality e_n(y) = e_n(a)."""
    x, _ = log_majorization_witness(q, d, tol)
    d_sorted = np.sort(np.asarray(d, dtype=np.float64))[::-1]
    y = x**2
    a = d_sorted**2
    entries = symmetric_chain_entries(y, a)
    det_slack = float(np.prod(y) - np.prod(a))
    return SymmetricChainReport(x=x, y=y, a=a, entries=entries, det_slack=det_slack, tol=tol)
