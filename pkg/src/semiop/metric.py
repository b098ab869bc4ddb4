"""The operator calculus induced by a positive semidefinite metric.

A PSD matrix A defines the semi-inner product ``<x, y>_A = <Ax, y>``
(linear in the first argument) and with it deformed versions of the
classical operator quantities. Every deformed quantity of an operator T
that admits a deformed adjoint equals the corresponding classical
quantity of the compression ``A^{1/2} T (A^{1/2})^+``, so all routes go
through that single reduction; sampling oracles live in the test suite
only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.linalg as npl

from .errors import DimensionMismatch, NegativeSpectrum, NotAMember
from .linalg import (
    DEFAULT_RANK_TOL,
    HermEigen,
    as_matrix,
    herm_eig,
    hermitianize,
    num_radius,
    op_norm,
    psd_fn,
    rank_threshold,
    spec_radius,
)


class Metric:
    """A PSD matrix with eagerly cached spectral data.

    Caches: eigendecomposition, rank under the global zero threshold
    tau = tol * n * lambda_max, the PSD square root, its pseudoinverse,
    the orthogonal projection onto the range, and the pseudoinverse of
    the metric itself. Instances are immutable after construction and
    safe for concurrent use.
    """

    def __init__(self, A: np.ndarray, tol: float = DEFAULT_RANK_TOL):
        A = as_matrix(A)
        if A.shape[0] != A.shape[1]:
            raise DimensionMismatch(f"metric must be square, got {A.shape}")
        self._init_from(A, herm_eig(A), tol)

    @classmethod
    def from_eigen(cls, A: np.ndarray, eig: HermEigen, tol: float) -> "Metric":
        """Trusted constructor from a precomputed decomposition."""
        self = cls.__new__(cls)
        self._init_from(A, eig, tol)
        return self

    def _init_from(self, A: np.ndarray, eig: HermEigen, tol: float) -> None:
        w = eig.eigenvalues
        norm = max(float(w[0]), 0.0) if len(w) else 0.0
        if len(w) and float(w[-1]) < -1e-10 * max(norm, 1.0):
            raise NegativeSpectrum(f"metric eigenvalue {float(w[-1]):.3e} is negative")
        self.A = A
        self.eig = eig
        self.tol = float(tol)
        self.dim = A.shape[0]
        self.norm = norm
        self.tau = rank_threshold(w, tol)
        keep = w > self.tau
        self.rank = int(np.sum(keep))
        # eigenvalues at or below tau are semantically zero everywhere
        wc = np.where(keep, np.maximum(w, 0.0), 0.0)
        self.sqrt = eig.apply(np.sqrt(wc))
        inv_sqrt = np.zeros_like(wc)
        inv_sqrt[keep] = 1.0 / np.sqrt(wc[keep])
        self.sqrt_pinv = eig.apply(inv_sqrt)
        inv = np.zeros_like(wc)
        inv[keep] = 1.0 / wc[keep]
        self.pinv = eig.apply(inv)
        self.proj = eig.apply(keep.astype(np.float64))

    @property
    def kernel_basis(self) -> np.ndarray:
        """Orthonormal basis of the kernel, shape (dim, dim - rank)."""
        return self.eig.basis[:, self.rank :]

    @property
    def range_basis(self) -> np.ndarray:
        """Orthonormal basis of the range, shape (dim, rank)."""
        return self.eig.basis[:, : self.rank]

    def check_vector(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.complex128).reshape(-1)
        if x.shape[0] != self.dim:
            raise DimensionMismatch(f"vector length {x.shape[0]} vs metric dim {self.dim}")
        return x

    def check_operator(self, T: np.ndarray) -> np.ndarray:
        T = as_matrix(T)
        if T.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"operator shape {T.shape} vs metric dim {self.dim}")
        return T


@dataclass(frozen=True)
class ABoundedCert:
    """Membership certificate: does T admit a deformed adjoint?

    ``residual`` is the operator-norm size of A^{1/2} T restricted to the
    kernel of A; membership holds iff it is negligible against
    max(1, ||A^{1/2} T||).
    """

    member: bool
    residual: float


def a_inner(metric: Metric, x: np.ndarray, y: np.ndarray) -> complex:
    """Semi-inner product <x, y>_A = <Ax, y>, linear in the first argument."""
    x = metric.check_vector(x)
    y = metric.check_vector(y)
    return complex(y.conj() @ (metric.A @ x))


def a_norm_vec(metric: Metric, x: np.ndarray) -> float:
    """Seminorm of a vector: sqrt of the real part of <x, x>_A."""
    x = metric.check_vector(x)
    return float(np.sqrt(max((x.conj() @ (metric.A @ x)).real, 0.0)))


def in_b_a(metric: Metric, T: np.ndarray, tol: float = 1e-9) -> ABoundedCert:
    """Deformed-adjoint membership test.

    In finite dimension T admits a deformed adjoint exactly when it maps
    the kernel of the metric into the kernel, i.e. A^{1/2} T vanishes on
    the kernel. One test decides membership for both A and A^{1/2}.
    """
    T = metric.check_operator(T)
    ST = metric.sqrt @ T
    K = metric.kernel_basis
    residual = op_norm(ST @ K) if K.shape[1] else 0.0
    return ABoundedCert(member=residual <= tol * max(1.0, op_norm(ST)), residual=residual)


def require_member(metric: Metric, T: np.ndarray) -> np.ndarray:
    T = metric.check_operator(T)
    cert = in_b_a(metric, T)
    if not cert.member:
        raise NotAMember(f"operator maps the metric kernel outside itself (residual {cert.residual:.3e})")
    return T


def sharp(metric: Metric, T: np.ndarray) -> np.ndarray:
    """Deformed adjoint A^+ T* A; solves A X = T* A with range inside R(A)."""
    T = require_member(metric, T)
    return metric.pinv @ T.conj().T @ metric.A


def compress(metric: Metric, T: np.ndarray) -> np.ndarray:
    """Compression A^{1/2} T (A^{1/2})^+.

    For any x of unit seminorm, with u = A^{1/2} x: ||Tx||_A equals
    ||compress(T) u|| and <Tx, x>_A equals <compress(T) u, u>, so every
    deformed quantity of T is the classical quantity of the compression.
    """
    T = require_member(metric, T)
    return metric.sqrt @ T @ metric.sqrt_pinv


def a_seminorm(metric: Metric, T: np.ndarray) -> float:
    """Deformed seminorm: sup of ||Tx||_A over unit-seminorm x."""
    return op_norm(compress(metric, T))


def a_num_radius(metric: Metric, T: np.ndarray, accuracy: float = 1e-10) -> float:
    """Deformed numerical radius: sup of |<Tx, x>_A| over unit-seminorm x."""
    return num_radius(compress(metric, T), accuracy=accuracy)


def a_spec_radius(metric: Metric, T: np.ndarray, rel_tol: float = 0.0) -> float:
    """Deformed spectral radius: Gelfand limit of ||T^n||_A^{1/n}.

    The default rel_tol of 0 disables the doubling ladder's early stop and
    runs it to the end. Increment-based stops are unreliable here: tied
    eigenvalue moduli (any real matrix with a dominant conjugate pair) give
    the norm sequence an oscillating factor whose near-stationary phases
    fake convergence far from the limit, while the full ladder is exact to
    about ||log factor|| / 2^40.
    """
    return spec_radius(compress(metric, T), rel_tol=rel_tol)


def a_abs(metric: Metric, T: np.ndarray) -> np.ndarray:
    """Deformed absolute value: the PSD square root of T* A T.

    Uses the algebraic identity A T^sharp T = T* A T, so no pseudoinverse
    enters the PSD root; membership is not required. Computed from the
    singular values of sqrt(A) T rather than an eigendecomposition of
    T* A T: small singular values come out with absolute accuracy, where
    the eigenvalue route would take square roots of rounding noise and
    turn a 1e-16 perturbation into 1e-8 structure on singular metrics.
    """
    T = metric.check_operator(T)
    _, s, vh = npl.svd(metric.sqrt @ T)
    return hermitianize((vh.conj().T * s) @ vh)


def is_a_selfadjoint(metric: Metric, T: np.ndarray, tol: float = 1e-9) -> bool:
    """True when A T is Hermitian within tolerance."""
    T = metric.check_operator(T)
    AT = metric.A @ T
    return op_norm(AT - AT.conj().T) <= tol * max(1.0, op_norm(AT))


def is_a_positive(metric: Metric, T: np.ndarray, tol: float = 1e-9) -> bool:
    """True when A T is Hermitian and PSD within tolerance."""
    T = metric.check_operator(T)
    AT = metric.A @ T
    scale = op_norm(AT)
    if op_norm(AT - AT.conj().T) > tol * max(1.0, scale):
        return False
    lam_min = float(npl.eigvalsh(hermitianize(AT))[0]) if AT.size else 0.0
    return lam_min >= -tol * max(1.0, scale)


def a_unit_sample(
    metric: Metric,
    rng: np.random.Generator,
    kernel_scale: float = 1.0,
) -> np.ndarray:
    """One vector of unit seminorm: (A^{1/2})^+ u plus a kernel component.

    u is a Haar-random unit vector in the range of A; the kernel component
    is Gaussian with the given scale, deliberately exercising directions
    the seminorm cannot see. Kernel vectors are never normalized (their
    seminorm is zero).
    """
    r = metric.rank
    c = rng.normal(size=r) + 1j * rng.normal(size=r)
    nc = npl.norm(c)
    if r == 0 or nc == 0.0:
        x = np.zeros(metric.dim, dtype=np.complex128)
    else:
        x = metric.sqrt_pinv @ (metric.range_basis @ (c / nc))
    nk = metric.dim - r
    if nk and kernel_scale > 0.0:
        d = rng.normal(size=nk) + 1j * rng.normal(size=nk)
        x = x + metric.kernel_basis @ (kernel_scale * d)
    return x


def a_vector_sample(metric: Metric, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """One unconstrained Gaussian vector (for bounds quantified over all vectors)."""
    return scale * (rng.normal(size=metric.dim) + 1j * rng.normal(size=metric.dim))


def a_unit_batch(
    metric: Metric,
    rng: np.random.Generator,
    count: int,
    kernel_scale: float = 1.0,
) -> np.ndarray:
    """Columns of unit-seminorm vectors, drawn as in a_unit_sample."""
    r = metric.rank
    n = metric.dim
    out = np.zeros((n, count), dtype=np.complex128)
    if r:
        c = rng.normal(size=(r, count)) + 1j * rng.normal(size=(r, count))
        norms = npl.norm(c, axis=0)
        norms[norms == 0.0] = 1.0
        out = metric.sqrt_pinv @ (metric.range_basis @ (c / norms))
    nk = n - r
    if nk and kernel_scale > 0.0:
        d = rng.normal(size=(nk, count)) + 1j * rng.normal(size=(nk, count))
        out = out + metric.kernel_basis @ (kernel_scale * d)
    return out


def a_vector_batch(metric: Metric, rng: np.random.Generator, count: int, scale: float = 1.0) -> np.ndarray:
    """Columns of unconstrained Gaussian vectors."""
    n = metric.dim
    return scale * (rng.normal(size=(n, count)) + 1j * rng.normal(size=(n, count)))
