"""Dense complex linear algebra kernels.

Everything in this module is classical (metric-free): Hermitian
eigendecomposition, Moore-Penrose pseudoinverse of PSD matrices, spectral
functions, operator norm, numerical radius via rotation maximization, and
spectral radius via Gelfand iteration with repeated squaring.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import numpy.linalg as npl

from .errors import NegativeSpectrum, NotHermitian

# One global convention: an eigenvalue below tol * n * lambda_max is
# semantically zero everywhere (rank, kernel, range decisions).
DEFAULT_RANK_TOL = 1e-10

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def as_matrix(M: object) -> np.ndarray:
    """Coerce input to a 2-d complex array, rejecting non-finite entries."""
    out = np.asarray(M, dtype=np.complex128)
    if out.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={out.ndim}")
    if not np.all(np.isfinite(out.view(np.float64))):
        raise ValueError("matrix has non-finite entries")
    return out


def hermitianize(H: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (H + H*)/2."""
    return 0.5 * (H + H.conj().T)


@dataclass(frozen=True)
class HermEigen:
    """Spectral decomposition of a Hermitian matrix, eigenvalues descending."""

    basis: np.ndarray
    eigenvalues: np.ndarray

    def reconstruct(self) -> np.ndarray:
        U, w = self.basis, self.eigenvalues
        return (U * w) @ U.conj().T

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Assemble U diag(values) U* for per-eigenvalue replacements."""
        U = self.basis
        return (U * values) @ U.conj().T


def herm_eig(H: np.ndarray, tol: float = 1e-10) -> HermEigen:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    The input is symmetrized before decomposition; a deviation from
    Hermitian symmetry beyond ``tol * max(1, norm)`` raises NotHermitian.
    """
    H = as_matrix(H)
    if H.shape[0] != H.shape[1]:
        raise ValueError(f"expected square matrix, got {H.shape}")
    dev = op_norm(H - H.conj().T)
    if dev > tol * max(1.0, _upper_norm(H)):
        raise NotHermitian(f"deviation from Hermitian symmetry {dev:.3e}")
    w, U = npl.eigh(hermitianize(H))
    return HermEigen(basis=np.ascontiguousarray(U[:, ::-1]), eigenvalues=w[::-1].copy())


def rank_threshold(eigenvalues: np.ndarray, tol: float = DEFAULT_RANK_TOL) -> float:
    """Zero threshold tau = tol * n * lambda_max for a PSD spectrum."""
    n = len(eigenvalues)
    if n == 0:
        return 0.0
    return tol * n * max(float(np.max(eigenvalues)), 0.0)


def pinv(A: np.ndarray, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse of a Hermitian PSD matrix.

    Eigenvalues at or below tau = tol * n * lambda_max are treated as exactly
    zero. The zero matrix maps to the zero matrix.
    """
    eig = herm_eig(A)
    tau = rank_threshold(eig.eigenvalues, tol)
    keep = eig.eigenvalues > tau
    inv = np.zeros_like(eig.eigenvalues)
    inv[keep] = 1.0 / eig.eigenvalues[keep]
    return eig.apply(inv)


def psd_fn(H: np.ndarray, f: Callable[[np.ndarray], np.ndarray], clamp_tol: float = 1e-10) -> np.ndarray:
    """Spectral function U f(Lambda) U* of a Hermitian PSD matrix.

    Eigenvalues within ``-clamp_tol * norm`` of zero are clamped to zero
    before applying ``f``; anything more negative raises NegativeSpectrum.
    ``f`` receives a nonnegative vector and must return one of equal length.
    """
    eig = herm_eig(H)
    w = eig.eigenvalues
    scale = max(float(w[0]), 0.0) if len(w) else 0.0
    floor = -clamp_tol * max(scale, 1.0)
    if len(w) and float(w[-1]) < floor:
        raise NegativeSpectrum(f"eigenvalue {float(w[-1]):.3e} below clamp threshold {floor:.3e}")
    vals = np.asarray(f(np.maximum(w, 0.0)), dtype=np.float64)
    return eig.apply(vals)


def _upper_norm(M: np.ndarray) -> float:
    """Cheap upper bound on the operator norm (Frobenius)."""
    return float(npl.norm(M))


def _lam_max_one(H: np.ndarray) -> float:
    """Largest eigenvalue of a single Hermitian matrix."""
    n = H.shape[0]
    if n == 1:
        return float(H[0, 0].real)
    if n == 2:
        a = H[0, 0].real
        d = H[1, 1].real
        half = 0.5 * (a - d)
        return float(0.5 * (a + d) + np.hypot(half, abs(H[0, 1])))
    return float(npl.eigvalsh(H)[-1])


def _lam_max_batch(stack: np.ndarray) -> np.ndarray:
    """Largest eigenvalues of a stack of Hermitian matrices, shape (N, n, n)."""
    n = stack.shape[-1]
    if n == 1:
        return stack[:, 0, 0].real.copy()
    if n == 2:
        a = stack[:, 0, 0].real
        d = stack[:, 1, 1].real
        half = 0.5 * (a - d)
        return 0.5 * (a + d) + np.hypot(half, np.abs(stack[:, 0, 1]))
    return npl.eigvalsh(stack)[:, -1]


def op_norm(M: np.ndarray) -> float:
    """Operator norm: largest singular value via lambda_max(M* M)."""
    M = np.asarray(M, dtype=np.complex128)
    if M.size == 0:
        return 0.0
    G = M.conj().T @ M
    lam = _lam_max_one(hermitianize(G))
    return float(np.sqrt(max(lam, 0.0)))


def rotation_max_eig(
    C: np.ndarray | None,
    D: np.ndarray,
    E: np.ndarray,
    accuracy: float = 1e-10,
    grid: int = 1024,
    brackets: int = 3,
) -> tuple[float, float]:
    """Maximize lambda_max(C + cos(t) D + sin(t) E) over t in [0, 2 pi).

    Returns (max value, argmax). Evaluates a uniform grid of at least
    ``grid`` angles, then refines the top ``brackets`` local maxima by
    golden-section search until the bracket width matches ``accuracy``
    under a curvature model bounded by the coefficient norms. The result
    is the max over every evaluated angle, so it never exceeds the true
    supremum.
    """
    grid = max(int(grid), 16)
    thetas = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
    cos_t = np.cos(thetas)[:, None, None]
    sin_t = np.sin(thetas)[:, None, None]
    stack = cos_t * D[None] + sin_t * E[None]
    if C is not None:
        stack += C[None]
    vals = _lam_max_batch(stack)

    scale = _upper_norm(D) + _upper_norm(E)
    if C is not None:
        scale += _upper_norm(C)
    width = np.sqrt(max(accuracy, 1e-15) / max(scale, 1.0))

    def phi(t: float) -> float:
        H = np.cos(t) * D + np.sin(t) * E
        if C is not None:
            H = H + C
        return _lam_max_one(H)

    best_val = float(np.max(vals))
    best_arg = float(thetas[int(np.argmax(vals))])

    step = 2.0 * np.pi / grid
    order = np.argsort(vals)[::-1]
    centers: list[int] = []
    for idx in order:
        if len(centers) >= max(int(brackets), 1):
            break
        if all(min(abs(idx - c), grid - abs(idx - c)) > 1 for c in centers):
            centers.append(int(idx))

    for c in centers:
        a = thetas[c] - step
        b = thetas[c] + step
        x1 = b - _INVPHI * (b - a)
        x2 = a + _INVPHI * (b - a)
        f1, f2 = phi(x1), phi(x2)
        while (b - a) > width:
            if f1 < f2:
                a, x1, f1 = x1, x2, f2
                x2 = a + _INVPHI * (b - a)
                f2 = phi(x2)
            else:
                b, x2, f2 = x2, x1, f1
                x1 = b - _INVPHI * (b - a)
                f1 = phi(x1)
            if f1 > best_val:
                best_val, best_arg = f1, x1
            if f2 > best_val:
                best_val, best_arg = f2, x2

    return best_val, best_arg % (2.0 * np.pi)


def num_radius(M: np.ndarray, accuracy: float = 1e-10, grid: int = 1024, brackets: int = 3) -> float:
    """Numerical radius via the rotation identity.

    w(M) = max over t of lambda_max((e^{it} M + e^{-it} M*) / 2), computed by
    grid evaluation plus golden-section refinement of the best brackets.
    """
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"expected square matrix, got {M.shape}")
    if M.shape[0] == 0 or not M.any():
        return 0.0
    H1 = hermitianize(M)
    H2 = hermitianize(0.5j * (M - M.conj().T))
    val, _ = rotation_max_eig(None, H1, H2, accuracy=accuracy, grid=grid, brackets=brackets)
    return max(float(val), 0.0)


def spec_radius(M: np.ndarray, rel_tol: float = 1e-9, max_doublings: int = 40) -> float:
    """Spectral radius as the Gelfand limit by repeated squaring.

    Maintains M^(2^k) with per-step normalization so the norm sequence is
    accumulated in logs; stops once successive estimates agree to
    ``rel_tol * max(1, estimate)`` twice in a row, or after
    ``max_doublings`` squarings. A single agreement is not trusted: for
    tied eigenvalue moduli (any real matrix with a dominant conjugate
    pair) the norm sequence carries an oscillating factor that can make
    two estimates coincide far from the limit.
    """
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"expected square matrix, got {M.shape}")
    if M.shape[0] == 0:
        return 0.0
    log_scale = 0.0  # log of the normalization accumulated into B
    B = M
    est_prev = np.inf
    streak = 0
    for k in range(max_doublings + 1):
        nb = op_norm(B)
        if nb == 0.0:
            return 0.0
        est = float(np.exp((np.log(nb) + log_scale) / (1 << k)))
        streak = streak + 1 if abs(est - est_prev) < rel_tol * max(1.0, est) else 0
        if streak == 2:
            return est
        est_prev = est
        B = B / nb
        B = B @ B
        log_scale = 2.0 * (log_scale + np.log(nb))
    return est_prev
