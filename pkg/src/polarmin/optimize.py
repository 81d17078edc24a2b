"""Objective evaluation and minimization of log-norm objectives over the
unitary group.

The headline claims verified here: the unitary polar factor attains the
minimum of ||log(Q* Z)|| and ||sym log(Q* Z)|| over unitary Q for every
unitarily invariant norm; admissible block-diagonal deformations attain
the same Ky Fan k-norm value; and only the polar factor is minimal for
all Ky Fan norms simultaneously.

Randomized searches evaluate thousands of candidates per matrix, so trial
evaluation runs through a batched eigendecomposition route (exact at
machine precision for diagonalizable arguments); every value that ends up
in a reported result or inequality is recomputed through the Schur-based
principal logarithm.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from . import densekit, matfun, norms
from .densekit import SvdFactors, adjoint, require_square
from .matfun import BranchCutError
from .norms import NormSpec, SymSkwWeights

MODES = ("full", "sym", "family")

# Substream indices for structured-candidate randomness, disjoint from the
# per-trial Haar streams which use indices 0..trials-1.
_PERM_STREAM = 1 << 62
_PHASE_STREAM = (1 << 62) + 1

_UNITARY_TOL = 1e-8


@dataclass(frozen=True)
class Objective:
    """Log-norm objective for a fixed square matrix z.

    mode "full" is ||log(q* z)||, "sym" is ||sym log(q* z)||, and "family"
    is mu*||sym log(q* z)|| + mu_c*||skw log(q* z)|| with the given weights.
    """

    z: np.ndarray
    spec: NormSpec
    mode: str = "full"
    weights: SymSkwWeights | None = None

    def __post_init__(self):
        z = densekit.as_matrix(self.z)
        require_square(z)
        object.__setattr__(self, "z", z)
        if self.mode not in MODES:
            raise ValueError(f"unknown objective mode {self.mode!r}")
        if self.mode == "family" and self.weights is None:
            raise ValueError("family mode requires SymSkwWeights")

    @property
    def n(self) -> int:
        return self.z.shape[0]


def _value_from_log(obj: Objective, log_qz: np.ndarray) -> float:
    if obj.mode == "full":
        return norms.ui_norm(log_qz, obj.spec)
    if obj.mode == "sym":
        return norms.ui_norm(matfun.sym_part(log_qz), obj.spec)
    return norms.sym_skw_objective(log_qz, obj.weights, obj.spec)


def evaluate(obj: Objective, q: np.ndarray, max_winding: int = 0) -> float | None:
    """Objective value at a unitary candidate via the principal logarithm.

    Returns None when q* z has an eigenvalue on the branch cut (searches
    treat that as a skip). With max_winding > 0 the value is additionally
    minimized over primary logarithm branches with winding indices up to
    max_winding (requires distinct eigenvalues; silently falls back to the
    principal branch when they are not).
    """
    q = np.asarray(q, dtype=np.complex128)
    n = require_square(q)
    if q.shape != obj.z.shape:
        raise ValueError(f"candidate shape {q.shape} does not match z {obj.z.shape}")
    if densekit.unitarity_residual(q) > _UNITARY_TOL * n:
        raise ValueError("candidate q is not unitary within tolerance")
    m = adjoint(q) @ obj.z
    try:
        log_qz = matfun.logm_principal(m)
    except BranchCutError:
        return None
    value = _value_from_log(obj, log_qz)
    if max_winding > 0:
        try:
            branches = matfun.log_branches(m, max_winding)
        except matfun.RepeatedEigenvalueError:
            branches = None
        if branches is not None:
            value = min(value, min(_value_from_log(obj, b) for b in branches.branches))
    return float(value)


# ---------------------------------------------------------------------------
# batched trial evaluation


def _haar_stack(n: int, seed, indices) -> np.ndarray:
    """Stack of Haar unitaries; trial i draws from the (seed, i) substream."""
    indices = list(indices)
    g = np.empty((len(indices), n, n), dtype=np.complex128)
    for row, idx in enumerate(indices):
        rng = np.random.default_rng([int(seed), int(idx)])
        g[row] = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (d / np.abs(d))[:, None, :]


def _structured_candidates(up: np.ndarray, seed) -> np.ndarray:
    """U_p itself plus column permutations and diagonal phase twists of it.

    Pure Haar sampling rarely lands near competing structured minima; these
    candidates sharpen the falsification attempt.
    """
    n = up.shape[0]
    cands = [up]
    if n <= 4:
        perms = [p for p in itertools.permutations(range(n)) if p != tuple(range(n))]
    else:
        rng = np.random.default_rng([int(seed), _PERM_STREAM])
        perms = [tuple(rng.permutation(n)) for _ in range(24)]
    cands.extend(up[:, list(p)] for p in perms)
    rng = np.random.default_rng([int(seed), _PHASE_STREAM])
    thetas = rng.uniform(-np.pi, np.pi, size=(8, n))
    cands.extend(up * np.exp(1j * t)[None, :] for t in thetas)
    return np.stack(cands)


def _log_sigma_stack(z: np.ndarray, q_stack: np.ndarray):
    """Per-candidate singular values of L, sym L and skw L for L = log(q* z).

    Uses the eigendecomposition route; rows whose spectrum touches the
    branch cut (or whose eigenvector matrix is singular) come back flagged
    in the cut mask and must be ignored by the caller.
    """
    m = adjoint(q_stack) @ z
    w, v = np.linalg.eig(m)
    on_cut = (np.abs(w) <= matfun.BRANCH_CUT_MODULUS) | (
        np.abs(np.abs(np.angle(w)) - np.pi) <= matfun.BRANCH_CUT_ANGLE
    )
    cut = np.any(on_cut, axis=-1)
    logw = np.log(np.where(on_cut, 1.0, w))
    try:
        vinv = np.linalg.inv(v)
    except np.linalg.LinAlgError:
        vinv = np.empty_like(v)
        for t in range(v.shape[0]):
            try:
                vinv[t] = np.linalg.inv(v[t])
            except np.linalg.LinAlgError:
                cut[t] = True
                vinv[t] = np.eye(v.shape[1])
    log_m = (v * logw[:, None, :]) @ vinv
    sig_full = np.linalg.svd(log_m, compute_uv=False)
    sym = 0.5 * (log_m + adjoint(log_m))
    skw = 0.5 * (log_m - adjoint(log_m))
    sig_sym = np.abs(np.linalg.eigvalsh(sym))
    sig_skw = np.abs(np.linalg.eigvalsh(1j * skw))
    return sig_full, sig_sym, sig_skw, cut


def _combo_values(obj: Objective, sig_full, sig_sym, sig_skw, cut) -> np.ndarray:
    if obj.mode == "full":
        vals = norms.gauge(sig_full, obj.spec)
    elif obj.mode == "sym":
        vals = norms.gauge(sig_sym, obj.spec)
    else:
        vals = obj.weights.mu * norms.gauge(sig_sym, obj.spec) + obj.weights.mu_c * norms.gauge(
            sig_skw, obj.spec
        )
    return np.where(cut, np.nan, np.asarray(vals, dtype=np.float64))


# ---------------------------------------------------------------------------
# global random search


@dataclass(frozen=True)
class SearchResult:
    """Best candidate found by a randomized minimization attempt.

    ``baseline`` is the objective at the unitary polar factor with the
    principal logarithm; the headline theorem predicts best_value >=
    baseline (up to tolerance) and the searches exist to attack that.
    """

    best_q: np.ndarray
    best_value: float
    baseline: float
    trials: int
    seed: int
    skipped: int = 0
    flagged: bool = False
    evaluated: int = 0


def random_search_grid(objectives: list[Objective], trials: int, seed) -> list[SearchResult]:
    """Run the randomized search for several objectives sharing one z.

    All objectives are evaluated on the same candidate set (U_p, its
    permutations and phase twists, plus ``trials`` Haar samples), so the
    per-trial random streams are identical across the grid.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not objectives:
        return []
    z = objectives[0].z
    for obj in objectives[1:]:
        if obj.z.shape != z.shape or not np.array_equal(obj.z, z):
            raise ValueError("all objectives in a grid search must share the same z")
    pf = densekit.polar(z)
    up = pf.unitary
    log_up = matfun.logm_principal(adjoint(up) @ z)
    candidates = np.concatenate([_structured_candidates(up, seed), _haar_stack(z.shape[0], seed, range(trials))])
    sig_full, sig_sym, sig_skw, cut = _log_sigma_stack(z, candidates)
    skipped = int(np.count_nonzero(cut))
    flagged = skipped > 0.01 * candidates.shape[0]

    exact_log_cache: dict[int, np.ndarray | None] = {}

    def exact_log(idx: int) -> np.ndarray | None:
        if idx not in exact_log_cache:
            try:
                exact_log_cache[idx] = matfun.logm_principal(adjoint(candidates[idx]) @ z)
            except BranchCutError:
                exact_log_cache[idx] = None
        return exact_log_cache[idx]

    results = []
    for obj in objectives:
        values = _combo_values(obj, sig_full, sig_sym, sig_skw, cut)
        order = np.argsort(np.where(np.isnan(values), np.inf, values), kind="stable")
        best_idx, best_value = None, np.inf
        # Re-evaluate the leading candidates through the exact logarithm;
        # the batch ranking is only a prefilter.
        checked = 0
        for idx in order:
            log_qz = exact_log(int(idx))
            if log_qz is None:
                continue
            val = _value_from_log(obj, log_qz)
            if val < best_value:
                best_idx, best_value = int(idx), val
            checked += 1
            if checked >= 3:
                break
        if best_idx is None:  # every candidate on the cut; cannot happen for nonsingular z
            raise BranchCutError(0.0)
        results.append(
            SearchResult(
                best_q=candidates[best_idx],
                best_value=float(best_value),
                baseline=_value_from_log(obj, log_up),
                trials=trials,
                seed=int(seed),
                skipped=skipped,
                flagged=flagged,
                evaluated=candidates.shape[0],
            )
        )
    return results


def random_search_min(obj: Objective, trials: int, seed) -> SearchResult:
    """Randomized minimization of one objective; see random_search_grid."""
    return random_search_grid([obj], trials, seed)[0]


# ---------------------------------------------------------------------------
# reduction to the diagonal case


def reduce_to_diagonal(z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Factor z = u_p v diag(d) v* with d positive descending.

    Objectives are invariant under this reduction: the value at (z, q)
    equals the value at (diag(d), v* u_p* q v).
    """
    z = densekit.as_matrix(z)
    require_square(z)
    pf = densekit.polar(z)
    vectors, values = densekit.hermitian_eig(pf.hermitian)
    return values, pf.unitary, vectors


# ---------------------------------------------------------------------------
# local descent in the skew-Hermitian chart


@functools.lru_cache(maxsize=32)
def _skew_basis(n: int) -> np.ndarray:
    """Orthonormal basis of skew-Hermitian n x n matrices (real dim n^2)."""
    mats = []
    for j in range(n):
        e = np.zeros((n, n), dtype=np.complex128)
        e[j, j] = 1j
        mats.append(e)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for j in range(n):
        for k in range(j + 1, n):
            a = np.zeros((n, n), dtype=np.complex128)
            a[j, k] = inv_sqrt2
            a[k, j] = -inv_sqrt2
            mats.append(a)
            b = np.zeros((n, n), dtype=np.complex128)
            b[j, k] = 1j * inv_sqrt2
            b[k, j] = 1j * inv_sqrt2
            mats.append(b)
    return np.stack(mats)


def _expm_skew_stack(s_stack: np.ndarray) -> np.ndarray:
    """exp of (stacked) skew-Hermitian matrices via the Hermitian eigensolver."""
    herm = -1j * s_stack
    lam, vec = np.linalg.eigh(0.5 * (herm + adjoint(herm)))
    return (vec * np.exp(1j * lam)[..., None, :]) @ adjoint(vec)


def _skew_to_vec(s: np.ndarray, basis: np.ndarray) -> np.ndarray:
    return np.einsum("ijk,jk->i", basis.conj(), s).real


def _vec_to_skew(x: np.ndarray, basis: np.ndarray) -> np.ndarray:
    return np.einsum("i,ijk->jk", x.astype(np.complex128), basis)


def _require_skew(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=np.complex128)
    require_square(s)
    if np.linalg.norm(s + adjoint(s)) > 1e-10 * (1.0 + np.linalg.norm(s)):
        raise ValueError("chart point must be skew-Hermitian")
    return s


def _chart_values(obj: Objective, up: np.ndarray, s_stack: np.ndarray) -> np.ndarray:
    q = up @ _expm_skew_stack(s_stack)
    return _combo_values(obj, *_log_sigma_stack(obj.z, q))


def fd_gradient(obj: Objective, s: np.ndarray, h: float = 1e-6) -> tuple[np.ndarray, float]:
    """Central-difference gradient of the chart objective S -> f(U_p exp(S)).

    Returns the gradient as a skew-Hermitian matrix together with its
    Frobenius norm (equal to the coefficient-vector norm in the
    orthonormal basis).
    """
    s = _require_skew(s)
    up = densekit.polar(obj.z).unitary
    g, norm = _fd_gradient_core(obj, up, s, h)
    return g, norm


def _fd_gradient_core(obj, up, s, h):
    basis = _skew_basis(obj.n)
    points = np.concatenate([s[None] + h * basis, s[None] - h * basis])
    vals = _chart_values(obj, up, points)
    if np.any(np.isnan(vals)):
        raise BranchCutError(0.0)
    d = basis.shape[0]
    coeffs = (vals[:d] - vals[d:]) / (2.0 * h)
    return _vec_to_skew(coeffs, basis), float(np.linalg.norm(coeffs))


@dataclass(frozen=True)
class DescentResult:
    s: np.ndarray
    value: float
    steps: int
    gradient_norm: float
    used_gradient: bool
    converged: bool


def local_descent(
    obj: Objective,
    s0: np.ndarray,
    steps: int = 300,
    step_size: float = 0.25,
    grad_h: float = 1e-6,
    grad_tol: float = 1e-8,
) -> DescentResult:
    """Monotone descent of the chart objective from the skew-Hermitian s0.

    Smooth norms (Frobenius, Schatten p > 1) use finite-difference gradient
    steps with backtracking; spectral, Ky Fan and Schatten-1 use compass
    search over the skew-Hermitian basis. Steps that cross the branch cut
    are rejected and halved.
    """
    s = _require_skew(np.asarray(s0, dtype=np.complex128)).copy()
    up = densekit.polar(obj.z).unitary
    basis = _skew_basis(obj.n)
    smooth = obj.spec.kind == "fro" or (obj.spec.kind == "schatten" and obj.spec.p > 1)

    f = float(_chart_values(obj, up, s[None])[0])
    if np.isnan(f):
        raise BranchCutError(0.0)

    taken = 0
    gnorm = np.inf
    converged = False
    if smooth:
        alpha = step_size
        for taken in range(1, steps + 1):
            try:
                g, gnorm = _fd_gradient_core(obj, up, s, grad_h)
            except BranchCutError:
                break
            if gnorm <= grad_tol:
                converged = True
                break
            a = alpha
            accepted = False
            for _ in range(40):
                s_try = s - a * g
                f_try = float(_chart_values(obj, up, s_try[None])[0])
                if np.isfinite(f_try) and f_try <= f - 1e-4 * a * gnorm * gnorm:
                    s, f = s_try, f_try
                    alpha = min(2.0 * a, step_size)
                    accepted = True
                    break
                a *= 0.5
            if not accepted:
                converged = True
                break
    else:
        h = step_size
        d = basis.shape[0]
        for taken in range(1, steps + 1):
            points = np.concatenate([s[None] + h * basis, s[None] - h * basis])
            vals = _chart_values(obj, up, points)
            vals = np.where(np.isnan(vals), np.inf, vals)
            idx = int(np.argmin(vals))
            if vals[idx] < f - 1e-15 * (1.0 + abs(f)):
                sign = 1.0 if idx < d else -1.0
                s = s + sign * h * basis[idx % d]
                f = float(vals[idx])
            else:
                h *= 0.5
                if h < 1e-9:
                    converged = True
                    break
        gnorm = np.nan

    exact = evaluate(obj, up @ _expm_skew_stack(s[None])[0])
    value = float(exact) if exact is not None else f
    return DescentResult(
        s=s, value=value, steps=taken, gradient_norm=float(gnorm),
        used_gradient=smooth, converged=converged,
    )


def _bfgs_polish(obj: Objective, up: np.ndarray, s_init: np.ndarray, gtol: float = 3e-9) -> np.ndarray:
    """Quasi-Newton refinement of a descent limit (smooth objectives only)."""
    basis = _skew_basis(obj.n)
    penalty = 1e6

    def fun(x):
        v = float(_chart_values(obj, up, _vec_to_skew(x, basis)[None])[0])
        return penalty if not np.isfinite(v) else v

    def jac(x):
        s = _vec_to_skew(x, basis)
        points = np.concatenate([s[None] + 1e-6 * basis, s[None] - 1e-6 * basis])
        vals = _chart_values(obj, up, points)
        d = basis.shape[0]
        return np.nan_to_num((vals[:d] - vals[d:]) / 2e-6)

    res = scipy.optimize.minimize(
        fun, _skew_to_vec(s_init, basis), jac=jac, method="BFGS",
        options={"gtol": gtol, "maxiter": 400},
    )
    return _vec_to_skew(res.x, basis)


# ---------------------------------------------------------------------------
# nearest unitary baseline (no logarithm involved)


@dataclass(frozen=True)
class NearestUnitaryGap:
    at_up: float
    sampled_min: float
    trials: int
    seed: int


def nearest_unitary_gap(z: np.ndarray, spec: NormSpec, trials: int = 200, seed=0) -> NearestUnitaryGap:
    """||z - U_p|| against the best ||z - Q|| over Haar samples.

    The polar factor is the nearest unitary in every unitarily invariant
    norm, so sampled_min should never undercut at_up.
    """
    z = densekit.as_matrix(z)
    require_square(z)
    pf = densekit.polar(z)
    at_up = norms.ui_norm(z - pf.unitary, spec)
    qs = _haar_stack(z.shape[0], seed, range(trials))
    sig = np.linalg.svd(z[None] - qs, compute_uv=False)
    sampled = float(np.min(norms.gauge(sig, spec)))
    return NearestUnitaryGap(at_up=at_up, sampled_min=sampled, trials=trials, seed=int(seed))


# ---------------------------------------------------------------------------
# the linear (non-log) family, where polar optimality can fail


@dataclass(frozen=True)
class FamilySearchResult:
    best_q: np.ndarray
    best_value: float
    at_up: float
    improvement: float
    found_counterexample: bool
    trials: int
    seed: int


def linear_family_counterexample_search(
    z: np.ndarray,
    weights: SymSkwWeights,
    spec: NormSpec,
    trials: int,
    seed,
    tol: float = 1e-9,
) -> FamilySearchResult:
    """Search for unitary q with mu*||sym(q*z - I)|| + mu_c*||skw(q*z - I)||
    below the value at the polar factor.

    Exploratory: for mu_c < mu such counterexamples exist for some z but a
    given seed may not find one. Requires 0 < mu_c <= mu (mu_c = mu is the
    boundary where the objective reduces to the nearest-unitary distance).
    """
    if not (0 < weights.mu_c <= weights.mu):
        raise ValueError("weights must satisfy 0 < mu_c <= mu")
    z = densekit.as_matrix(z)
    n = require_square(z)
    pf = densekit.polar(z)
    up = pf.unitary

    def values_for(q_stack: np.ndarray) -> np.ndarray:
        e = adjoint(q_stack) @ z - np.eye(n)
        sig_sym = np.abs(np.linalg.eigvalsh(0.5 * (e + adjoint(e))))
        sig_skw = np.abs(np.linalg.eigvalsh(1j * 0.5 * (e - adjoint(e))))
        return weights.mu * norms.gauge(sig_sym, spec) + weights.mu_c * norms.gauge(sig_skw, spec)

    candidates = np.concatenate([_structured_candidates(up, seed), _haar_stack(n, seed, range(trials))])
    vals = values_for(candidates)
    at_up = float(values_for(up[None])[0])
    idx = int(np.argmin(vals))
    best_value = float(vals[idx])
    improvement = at_up - best_value
    return FamilySearchResult(
        best_q=candidates[idx],
        best_value=best_value,
        at_up=at_up,
        improvement=improvement,
        found_counterexample=improvement > tol * (1.0 + abs(at_up)),
        trials=trials,
        seed=int(seed),
    )


# ---------------------------------------------------------------------------
# Ky Fan minimizer families and uniqueness


def permuted_svd_by_log_modulus(z: np.ndarray) -> SvdFactors:
    """SVD with singular values reordered so |log sigma| is descending."""
    z = densekit.as_matrix(z)
    require_square(z)
    f = densekit.svd(z)
    if f.sigma[-1] <= densekit.RANK_TOL * f.sigma[0]:
        raise densekit.RankDeficientError(f.sigma[-1], densekit.RANK_TOL * f.sigma[0])
    order = np.argsort(-np.abs(np.log(f.sigma)), kind="stable")
    return SvdFactors(u=f.u[:, order], sigma=f.sigma[order], v=f.v[:, order])


@dataclass(frozen=True)
class KyFanFamilyMember:
    q_hat: np.ndarray
    admissible: bool
    value_k: float
    kyfan_baseline: float     # sum of the k largest |log sigma|
    condition_lhs: float      # spectral norm of log(q22 @ diag(tail))
    condition_rhs: float      # |log sigma_hat_k|


def kyfan_minimizer_family(z: np.ndarray, k: int, q22: np.ndarray) -> KyFanFamilyMember:
    """Candidate minimizer u_hat diag(I_k, q22) v_hat* for the Ky Fan k-norm.

    Admissibility requires the spectral norm of log(q22 diag(tail)) to stay
    within |log sigma_hat_k|; admissible members match the Ky Fan k-norm
    baseline exactly.
    """
    f = permuted_svd_by_log_modulus(z)
    n = f.sigma.size
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    q22 = np.asarray(q22, dtype=np.complex128)
    m = n - k
    if q22.shape != (m, m):
        raise ValueError(f"q22 must be {m}x{m}, got {q22.shape}")
    if m > 0 and densekit.unitarity_residual(q22) > _UNITARY_TOL * max(m, 1):
        raise ValueError("q22 is not unitary within tolerance")
    block = np.eye(n, dtype=np.complex128)
    if m > 0:
        block[k:, k:] = q22
    q_hat = f.u @ block @ adjoint(f.v)
    threshold = float(np.abs(np.log(f.sigma[k - 1])))
    if m == 0:
        condition_lhs = 0.0
    else:
        tail = q22 @ np.diag(f.sigma[k:]).astype(np.complex128)
        condition_lhs = norms.ui_norm(matfun.logm_principal(tail), norms.spectral())
    admissible = condition_lhs <= threshold + 1e-12
    log_qz = matfun.logm_principal(adjoint(q_hat) @ z)
    value_k = norms.ui_norm(log_qz, norms.kyfan(k))
    baseline = float(np.sum(np.abs(np.log(f.sigma[:k]))))
    return KyFanFamilyMember(
        q_hat=q_hat,
        admissible=admissible,
        value_k=value_k,
        kyfan_baseline=baseline,
        condition_lhs=condition_lhs,
        condition_rhs=threshold,
    )


def _kyfan_value_prefixes(z: np.ndarray, q: np.ndarray) -> np.ndarray:
    """All Ky Fan values of log(q* z) at once: prefix sums of its singular values."""
    log_qz = matfun.logm_principal(adjoint(q) @ z)
    return np.cumsum(norms.singular_values(log_qz))


def admissible_q22(z: np.ndarray, k: int, seed, min_distance: float = 1e-2) -> np.ndarray | None:
    """A unitary q22 != I admissible for the Ky Fan k family of z, or None.

    Walks exp(t S) for a random skew direction S down from t = pi and keeps
    the largest admissible t; returns None when admissibility confines q22
    too close to the identity to be an interesting candidate.
    """
    f = permuted_svd_by_log_modulus(z)
    n = f.sigma.size
    m = n - k
    if m == 0:
        return None
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    s = g - adjoint(g)
    if np.linalg.norm(s) < 1e-12:
        s = 1j * np.eye(m)
    s = s / np.linalg.norm(s)
    tail = np.diag(f.sigma[k:]).astype(np.complex128)
    threshold = float(np.abs(np.log(f.sigma[k - 1])))
    for t in np.geomspace(np.pi, 1e-3, 25):
        q22 = _expm_skew_stack((t * s)[None])[0]
        try:
            lhs = norms.ui_norm(matfun.logm_principal(q22 @ tail), norms.spectral())
        except BranchCutError:
            continue
        if lhs <= threshold - 1e-9:
            if np.linalg.norm(q22 - np.eye(m)) >= min_distance:
                return q22
            return None
    return None


@dataclass(frozen=True)
class FamilyProbeCase:
    k: int
    q22_distance: float
    value_k: float
    baseline_k: float
    matches_k: bool
    fails_at: int | None
    max_excess: float


@dataclass(frozen=True)
class DescentProbeCase:
    start_norm: float
    distance_to_up: float
    max_kyfan_gap: float
    achieved_all_k: bool
    within_tol: bool


@dataclass(frozen=True)
class UniquenessReport:
    sigma_hat: np.ndarray
    kyfan_baselines: np.ndarray
    family_cases: list[FamilyProbeCase] = field(repr=False)
    descent_cases: list[DescentProbeCase] = field(repr=False)
    passed: bool = False


def uniqueness_probe(
    z: np.ndarray,
    tol: float = 1e-6,
    seed=0,
    min_separation: float = 0.05,
    descent_start_norms=(1e-2, 1e-1),
) -> UniquenessReport:
    """Numerical probe of all-norm uniqueness of the polar factor.

    (a) Builds admissible Ky Fan family members with q22 != I for each
    k < n and verifies each matches its own Ky Fan k baseline but exceeds
    the baseline for some other k'. (b) Runs local descent plus a
    quasi-Newton polish from skew perturbations and checks that any limit
    matching the baseline across every Ky Fan norm lies within ``tol`` of
    the polar factor.

    Rejects z whose |log sigma| values are separated by less than
    ``min_separation`` (distinguishing minimizers under ties is ill-posed).
    """
    z = densekit.as_matrix(z)
    n = require_square(z)
    f = permuted_svd_by_log_modulus(z)
    key = np.abs(np.log(f.sigma))
    if np.min(np.abs(np.diff(key))) < min_separation if n > 1 else False:
        raise ValueError(
            f"|log sigma| separation below {min_separation}; probe requires distinct moduli"
        )
    baselines = np.cumsum(key)
    pf = densekit.polar(z)
    up = pf.unitary
    eq_tol = 1e-9

    family_cases: list[FamilyProbeCase] = []
    for k in range(1, n):
        q22 = admissible_q22(z, k, [int(seed), k])
        if q22 is None:
            continue
        member = kyfan_minimizer_family(z, k, q22)
        prefixes = _kyfan_value_prefixes(z, member.q_hat)
        excess = prefixes - baselines
        matches_k = abs(excess[k - 1]) <= eq_tol * (1.0 + baselines[k - 1])
        fails_at = None
        for kk in range(1, n + 1):
            if excess[kk - 1] > eq_tol * (1.0 + baselines[kk - 1]):
                fails_at = kk
                break
        family_cases.append(
            FamilyProbeCase(
                k=k,
                q22_distance=float(np.linalg.norm(q22 - np.eye(n - k))),
                value_k=float(prefixes[k - 1]),
                baseline_k=float(baselines[k - 1]),
                matches_k=matches_k,
                fails_at=fails_at,
                max_excess=float(np.max(excess)),
            )
        )

    obj = Objective(z, norms.frobenius(), "full")
    basis = _skew_basis(n)
    descent_cases: list[DescentProbeCase] = []
    rng = np.random.default_rng([int(seed), 1 << 32])
    for start_norm in descent_start_norms:
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        s0 = g - adjoint(g)
        s0 = start_norm * s0 / np.linalg.norm(s0)
        res = local_descent(obj, s0, steps=200, step_size=0.2)
        s_fin = _bfgs_polish(obj, up, res.s)
        q_lim = up @ _expm_skew_stack(s_fin[None])[0]
        prefixes = _kyfan_value_prefixes(z, q_lim)
        gaps = prefixes - baselines
        achieved = bool(np.all(gaps <= eq_tol * (1.0 + baselines)))
        dist = float(np.linalg.norm(q_lim - up))
        descent_cases.append(
            DescentProbeCase(
                start_norm=float(start_norm),
                distance_to_up=dist,
                max_kyfan_gap=float(np.max(gaps)),
                achieved_all_k=achieved,
                within_tol=dist <= tol,
            )
        )

    family_ok = all(c.matches_k and c.fails_at is not None for c in family_cases)
    descent_ok = all((not c.achieved_all_k) or c.within_tol for c in descent_cases)
    return UniquenessReport(
        sigma_hat=f.sigma,
        kyfan_baselines=baselines,
        family_cases=family_cases,
        descent_cases=descent_cases,
        passed=family_ok and descent_ok,
    )


# ---------------------------------------------------------------------------
# the rectangular counterexample


@dataclass(frozen=True)
class RectangularReport:
    z: np.ndarray
    u_p: np.ndarray
    v: np.ndarray
    objective_at_up: float
    objective_at_v: float
    nearest_at_up: float
    nearest_at_v: float
    note: str

    @property
    def log_min_fails(self) -> bool:
        return self.objective_at_v < self.objective_at_up - 1e-12

    @property
    def nearest_unitary_holds(self) -> bool:
        return self.nearest_at_up <= self.nearest_at_v + 1e-12


def rectangular_counterexample_check() -> RectangularReport:
    """For tall Z = [1; 1], the isometry V = [1; 0] beats the polar factor
    in the log objective, while the polar factor still wins the
    nearest-isometry distance.

    Note U_p* Z = sqrt(2), so the log objective at U_p is log(sqrt(2)) ~=
    0.3466 — not 1/sqrt(2) ~= 0.7071, a tempting mix-up since U_p's entries
    are 1/sqrt(2).
    """
    z = np.array([[1.0], [1.0]], dtype=np.complex128)
    pf = densekit.polar(z)
    v = np.array([[1.0], [0.0]], dtype=np.complex128)
    obj_up = abs(np.log((adjoint(pf.unitary) @ z)[0, 0]))
    obj_v = abs(np.log((adjoint(v) @ z)[0, 0]))
    return RectangularReport(
        z=z,
        u_p=pf.unitary,
        v=v,
        objective_at_up=float(obj_up.real),
        objective_at_v=float(obj_v.real),
        nearest_at_up=float(np.linalg.norm(z - pf.unitary)),
        nearest_at_v=float(np.linalg.norm(z - v)),
        note=(
            "U_p* Z = sqrt(2): the log objective at U_p is log(sqrt(2)) "
            "~= 0.34657, not 1/sqrt(2) ~= 0.70711."
        ),
    )
