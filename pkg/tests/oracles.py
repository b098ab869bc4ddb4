"""Independent brute-force oracles used only by the test suite.

These deliberately avoid the library's own algorithmic routes: the
numerical-radius oracle uses random sampling plus power-iteration ascent
(no batched eigendecomposition, no rotation grid), the spectral-radius
oracle uses the general eigenvalue solver the library itself avoids, and
the membership oracle uses a rank test on stacked ranges.
"""

from __future__ import annotations

import numpy as np
import numpy.linalg as npl


def random_matrix(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    return scale * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))


def random_hermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    M = random_matrix(rng, n, scale)
    return 0.5 * (M + M.conj().T)


def random_psd(rng: np.random.Generator, n: int, rank: int | None = None) -> np.ndarray:
    rank = n if rank is None else rank
    G = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    return G @ G.conj().T


def num_radius_oracle(
    M: np.ndarray,
    rng: np.random.Generator,
    samples: int = 50_000,
    ascents: int = 10,
    iters: int = 500,
) -> float:
    """Brute-force numerical radius: sampling plus local ascent.

    Draws random unit vectors, keeps the best few, and polishes each by
    power iteration on the rotated Hermitian part (with a positive shift),
    re-estimating the phase every step. Never exceeds the true value.
    """
    n = M.shape[0]
    X = rng.normal(size=(samples, n)) + 1j * rng.normal(size=(samples, n))
    X /= npl.norm(X, axis=1, keepdims=True)
    vals = np.abs(np.einsum("bi,ij,bj->b", X.conj(), M, X))
    best = float(np.max(vals))
    shift = float(npl.norm(M)) + 1.0
    for idx in np.argsort(vals)[-ascents:]:
        x = X[idx].copy()
        for _ in range(iters):
            z = x.conj() @ M @ x
            phase = z / abs(z) if abs(z) > 0 else 1.0
            H = 0.5 * (np.conj(phase) * M + phase * M.conj().T)
            y = H @ x + shift * x
            ny = npl.norm(y)
            if ny == 0.0:
                break
            x = y / ny
        best = max(best, float(abs(x.conj() @ M @ x)))
    return best


def spec_radius_oracle(M: np.ndarray) -> float:
    """Spectral radius via the general eigenvalue solver."""
    if M.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(npl.eigvals(M))))


def penrose_residuals(A: np.ndarray, Ap: np.ndarray) -> tuple[float, float, float, float]:
    """Operator-norm residuals of the four Penrose identities."""

    def onorm(M: np.ndarray) -> float:
        return float(npl.norm(M, 2)) if M.size else 0.0

    return (
        onorm(A @ Ap @ A - A),
        onorm(Ap @ A @ Ap - Ap),
        onorm((A @ Ap).conj().T - A @ Ap),
        onorm((Ap @ A).conj().T - Ap @ A),
    )


def membership_oracle(A: np.ndarray, T: np.ndarray, tol: float = 1e-8) -> bool:
    """Range test: T admits a deformed adjoint iff R(T* A) lies inside R(A)."""
    stacked = np.hstack([A, T.conj().T @ A])
    return npl.matrix_rank(stacked, tol=tol) == npl.matrix_rank(A, tol=tol)


def a_unit_samples(
    A: np.ndarray,
    rng: np.random.Generator,
    count: int,
    kernel_scale: float = 1.0,
    tol: float = 1e-10,
) -> np.ndarray:
    """Vectors of unit deformed norm, with deliberate kernel components.

    Built directly from an eigendecomposition of A, independently of the
    library's Metric caches.
    """
    w, U = npl.eigh(0.5 * (A + A.conj().T))
    n = A.shape[0]
    tau = tol * n * max(float(np.max(w)), 0.0) if n else 0.0
    keep = w > tau
    out = np.empty((count, n), dtype=np.complex128)
    for i in range(count):
        c = rng.normal(size=int(np.sum(keep))) + 1j * rng.normal(size=int(np.sum(keep)))
        c /= npl.norm(c)
        x = U[:, keep] @ (c / np.sqrt(w[keep]))
        if kernel_scale > 0 and np.sum(~keep):
            d = rng.normal(size=int(np.sum(~keep))) + 1j * rng.normal(size=int(np.sum(~keep)))
            x = x + U[:, ~keep] @ (kernel_scale * d)
        out[i] = x
    return out


def a_seminorm_oracle(
    A: np.ndarray,
    T: np.ndarray,
    rng: np.random.Generator,
    samples: int = 20_000,
    kernel_scale: float = 1.0,
) -> float:
    """Brute-force deformed seminorm: sup of ||Tx||_A over unit-||.||_A samples,
    polished by power iteration in the range coordinates."""
    X = a_unit_samples(A, rng, samples, kernel_scale)
    TX = X @ T.T
    vals = np.sqrt(np.maximum(np.einsum("bi,ij,bj->b", TX.conj(), A, TX).real, 0.0))
    best = float(np.max(vals))

    w, U = npl.eigh(0.5 * (A + A.conj().T))
    tau = 1e-10 * A.shape[0] * max(float(np.max(w)), 0.0)
    keep = w > tau
    R = (U[:, keep] * np.sqrt(w[keep])).conj().T @ T @ (U[:, keep] / np.sqrt(w[keep]))
    G = R.conj().T @ R
    v = rng.normal(size=G.shape[0]) + 1j * rng.normal(size=G.shape[0])
    for _ in range(500):
        v = G @ v
        nv = npl.norm(v)
        if nv == 0.0:
            break
        v = v / nv
    if npl.norm(v) > 0:
        best = max(best, float(np.sqrt(max((v.conj() @ G @ v).real, 0.0) / (v.conj() @ v).real)))
    return best


def a_num_radius_oracle(
    A: np.ndarray,
    T: np.ndarray,
    rng: np.random.Generator,
    samples: int = 20_000,
    kernel_scale: float = 1.0,
) -> float:
    """Brute-force deformed numerical radius over unit-||.||_A samples,
    polished by phase-tracking power iteration in the range coordinates."""
    X = a_unit_samples(A, rng, samples, kernel_scale)
    AT = A @ T
    vals = np.abs(np.einsum("bi,ij,bj->b", X.conj(), AT, X))
    best = float(np.max(vals))

    w, U = npl.eigh(0.5 * (A + A.conj().T))
    tau = 1e-10 * A.shape[0] * max(float(np.max(w)), 0.0)
    keep = w > tau
    R = (U[:, keep] * np.sqrt(w[keep])).conj().T @ T @ (U[:, keep] / np.sqrt(w[keep]))
    shift = float(npl.norm(R)) + 1.0
    order = np.argsort(vals)[-10:]
    for idx in order:
        u = (U[:, keep] * np.sqrt(w[keep])).conj().T @ X[idx]
        nu = npl.norm(u)
        if nu == 0.0:
            continue
        u = u / nu
        for _ in range(500):
            z = u.conj() @ R @ u
            phase = z / abs(z) if abs(z) > 0 else 1.0
            H = 0.5 * (np.conj(phase) * R + phase * R.conj().T)
            y = H @ u + shift * u
            ny = npl.norm(y)
            if ny == 0.0:
                break
            u = y / ny
        best = max(best, float(abs(u.conj() @ R @ u)))
    return best


def random_member(A: np.ndarray, rng: np.random.Generator, tol: float = 1e-10) -> np.ndarray:
    """Random operator mapping the kernel of A into itself (admits a deformed adjoint)."""
    w, U = npl.eigh(0.5 * (A + A.conj().T))
    n = A.shape[0]
    tau = tol * n * max(float(np.max(w)), 0.0) if n else 0.0
    keep = w > tau
    C = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    if np.any(~keep):
        C[np.ix_(keep, ~keep)] = 0.0
    return U @ C @ U.conj().T


def _eigen_groups(w: np.ndarray) -> list[np.ndarray]:
    """Index masks of the (numerically) equal-eigenvalue groups of A."""
    scale = max(float(np.max(np.abs(w))), 1.0) if w.size else 1.0
    groups, used = [], np.zeros(w.size, dtype=bool)
    for i in range(w.size):
        if used[i]:
            continue
        grp = np.abs(w - w[i]) <= 1e-8 * scale
        used |= grp
        groups.append(grp)
    return groups


def random_commuting(A: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Random operator commuting with A: arbitrary blocks on each eigenspace.

    Repeated eigenvalues of A give nonnormal blocks; the kernel eigenspace
    block makes the result a generic member, not just a polynomial in A.
    """
    w, U = npl.eigh(0.5 * (A + A.conj().T))
    C = np.zeros((w.size, w.size), dtype=np.complex128)
    for grp in _eigen_groups(w):
        k = int(np.sum(grp))
        C[np.ix_(grp, grp)] = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    return U @ C @ U.conj().T


def random_psd_commuting(A: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Random PSD operator commuting with A (Hermitian blocks per eigenspace)."""
    w, U = npl.eigh(0.5 * (A + A.conj().T))
    C = np.zeros((w.size, w.size), dtype=np.complex128)
    for grp in _eigen_groups(w):
        k = int(np.sum(grp))
        G = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
        C[np.ix_(grp, grp)] = G @ G.conj().T / max(k, 1)
    return U @ C @ U.conj().T


def random_intertwining_pair(
    A: np.ndarray, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """A pair (X, Y) with A X = X A and |X|_A Y = Y^sharp |X|_A.

    X gets arbitrary eigenspace blocks; Y gets a real polynomial in the
    classical absolute value of the matching X block, which is Hermitian
    and commutes with it, so the intertwining relation holds per block.
    """
    w, U = npl.eigh(0.5 * (A + A.conj().T))
    CX = np.zeros((w.size, w.size), dtype=np.complex128)
    CY = np.zeros((w.size, w.size), dtype=np.complex128)
    for grp in _eigen_groups(w):
        k = int(np.sum(grp))
        B = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
        CX[np.ix_(grp, grp)] = B
        absB = _psd_sqrt(B.conj().T @ B)
        c = rng.normal(size=3)
        CY[np.ix_(grp, grp)] = c[0] * np.eye(k) + c[1] * absB + c[2] * absB @ absB
    return U @ CX @ U.conj().T, U @ CY @ U.conj().T


def _psd_sqrt(H: np.ndarray) -> np.ndarray:
    vals, vecs = npl.eigh(0.5 * (H + H.conj().T))
    return (vecs * np.sqrt(np.maximum(vals, 0.0))) @ vecs.conj().T
