"""Operators on finite direct sums of a seminormed space.

The metric A on H lifts blockwise to H^k. For 2x2 block operators the
lifted numerical radius, seminorm, deformed adjoint, and absolute value
all reduce to quantities of the blocks; ``block_identity_check`` and
``offdiag_abs_check`` verify those reductions on concrete operators.
Throughout, ``block_offdiag(X, Y)`` places X upper right and Y lower
left.
"""

from __future__ import annotations

import numpy as np

from ._records import CheckRecord, finish_record
from .errors import BadParams, DimensionMismatch, NotAMember
from .linalg import HermEigen, as_matrix, op_norm, rotation_max_eig
from .metric import (
    Metric,
    a_abs,
    a_num_radius,
    a_seminorm,
    compress,
    in_b_a,
    sharp,
)

BLOCK_PARTS = (
    "diag_radius",
    "swap",
    "phase",
    "circulant",
    "rotation_norm",
    "norm_max",
    "sharp",
)

# accepted aliases: position in the traditional enumeration of the identities
_PART_ALIASES = {
    "i": "diag_radius",
    "ii": "swap",
    "iii": "phase",
    "iv": "circulant",
    "v": "rotation_norm",
    "vi": "norm_max",
    "vii": "sharp",
}


def _conforming(*mats: np.ndarray) -> list[np.ndarray]:
    out = [as_matrix(M) for M in mats]
    n = out[0].shape[0]
    for M in out:
        if M.shape != (n, n):
            raise DimensionMismatch(f"blocks must all be square of one size, got {M.shape} vs ({n}, {n})")
    return out


def block2(X: np.ndarray, Y: np.ndarray, Z: np.ndarray, W: np.ndarray) -> np.ndarray:
    """The 2x2 block operator [[X, Y], [Z, W]] on H^2."""
    X, Y, Z, W = _conforming(X, Y, Z, W)
    return np.block([[X, Y], [Z, W]])


def block_diag(X: np.ndarray, W: np.ndarray) -> np.ndarray:
    """The diagonal block operator [[X, 0], [0, W]]."""
    X, W = _conforming(X, W)
    O = np.zeros_like(X)
    return np.block([[X, O], [O, W]])


def block_offdiag(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """The off-diagonal block operator [[0, X], [Y, 0]]."""
    X, Y = _conforming(X, Y)
    O = np.zeros_like(X)
    return np.block([[O, X], [Y, O]])


def blockn(grid) -> np.ndarray:
    """Assemble a k x k grid of conforming square blocks into one operator."""
    rows = [list(row) for row in grid]
    k = len(rows)
    if k == 0 or any(len(row) != k for row in rows):
        raise DimensionMismatch("block grid must be square and nonempty")
    flat = _conforming(*(B for row in rows for B in row))
    return np.block([[flat[i * k + j] for j in range(k)] for i in range(k)])


class BlockMetric:
    """The metric on H^k induced by k identical copies of a base metric.

    The lifted matrix is block-diagonal with the base metric in each
    copy, so its eigendecomposition is assembled exactly from the base
    one; no new eigensolve happens and the lifted rank cutoff agrees
    with the base cutoff on every copy.
    """

    def __init__(self, base: Metric, copies: int = 2):
        if copies < 1:
            raise BadParams(f"copies must be a positive integer, got {copies}")
        self.base = base
        self.copies = int(copies)
        k = self.copies
        lifted_a = np.kron(np.eye(k), base.A)
        basis = np.kron(np.eye(k), base.eig.basis)
        values = np.tile(base.eig.eigenvalues, k)
        order = np.argsort(-values, kind="stable")
        eig = HermEigen(
            basis=np.ascontiguousarray(basis[:, order]),
            eigenvalues=np.ascontiguousarray(values[order]),
        )
        # tol / k keeps the lifted absolute cutoff equal to the base one
        self.lifted = Metric.from_eigen(lifted_a, eig, tol=base.tol / k)

    @property
    def dim(self) -> int:
        return self.lifted.dim

    def lift(self, T: np.ndarray) -> np.ndarray:
        """The k-fold diagonal embedding diag(T, ..., T)."""
        T = self.base.check_operator(T)
        return np.kron(np.eye(self.copies), T)


def _member_residuals(metric: Metric, named: dict[str, np.ndarray]) -> dict[str, float]:
    out = {}
    for name, M in named.items():
        cert = in_b_a(metric, M)
        if not cert.member:
            raise NotAMember(f"block {name} maps the metric kernel outside itself (residual {cert.residual:.3e})")
        out[f"member_{name}"] = cert.residual
    return out


def _rotation_sup_norm(metric: Metric, X: np.ndarray, S: np.ndarray, accuracy: float) -> float:
    """sup over phases of the seminorm of e^{i t} X + e^{-i t} S.

    The squared compressed norm is K0 + e^{2it} K1 + conj-transpose with
    K0 = CX*CX + CS*CS and K1 = CS*CX, a rotation family maximized by
    the shared one-parameter eigenvalue search.
    """
    cx = compress(metric, X)
    cs = compress(metric, S)
    k0 = cx.conj().T @ cx + cs.conj().T @ cs
    k1 = cs.conj().T @ cx
    val, _ = rotation_max_eig(k0, k1 + k1.conj().T, 1j * (k1 - k1.conj().T), accuracy=accuracy)
    return float(np.sqrt(max(val, 0.0)))


def block_identity_check(
    metric: Metric,
    part: str,
    X: np.ndarray,
    Y: np.ndarray,
    Z: np.ndarray | None = None,
    W: np.ndarray | None = None,
    theta: float = 0.0,
    tol: float = 1e-8,
    accuracy: float = 1e-10,
    seed: int = 0,
) -> CheckRecord:
    """Verify one reduction identity for 2x2 block operators.

    Parts: "diag_radius" (radius of a diagonal block operator is the max
    of the block radii), "swap" (off-diagonal radius is symmetric in the
    blocks), "phase" (a unimodular factor on the lower block preserves
    it), "circulant" (radius of [[X, Y], [Y, X]] is the max radius of
    X +- Y), "rotation_norm" (off-diagonal radius as half a sup of
    rotated seminorms), "norm_max" (diagonal and off-diagonal seminorms
    both equal the max block seminorm), "sharp" (the deformed adjoint
    acts blockwise with the off-diagonal pair transposed; needs Z, W).
    """
    part = _PART_ALIASES.get(part, part)
    if part not in BLOCK_PARTS:
        raise BadParams(f"unknown identity part {part!r}, expected one of {BLOCK_PARTS}")
    X = metric.check_operator(X)
    Y = metric.check_operator(Y)
    operands = {"X": X, "Y": Y}
    if part == "sharp":
        if Z is None or W is None:
            raise BadParams("part 'sharp' needs all four blocks X, Y, Z, W")
        Z = metric.check_operator(Z)
        W = metric.check_operator(W)
        operands.update({"Z": Z, "W": W})
    residuals = _member_residuals(metric, operands)
    lifted = BlockMetric(metric, 2).lifted
    theorem_id = f"BLOCK_{part.upper()}"
    residual = None

    if part == "diag_radius":
        lhs = a_num_radius(lifted, block_diag(X, Y), accuracy=accuracy)
        rhs = max(a_num_radius(metric, X, accuracy=accuracy), a_num_radius(metric, Y, accuracy=accuracy))
    elif part == "swap":
        lhs = a_num_radius(lifted, block_offdiag(X, Y), accuracy=accuracy)
        rhs = a_num_radius(lifted, block_offdiag(Y, X), accuracy=accuracy)
    elif part == "phase":
        if not np.isfinite(theta):
            raise BadParams(f"theta must be finite, got {theta}")
        rotated = block2(np.zeros_like(X), X, np.exp(1j * theta) * Y, np.zeros_like(X))
        lhs = a_num_radius(lifted, rotated, accuracy=accuracy)
        rhs = a_num_radius(lifted, block_offdiag(X, Y), accuracy=accuracy)
    elif part == "circulant":
        lhs = a_num_radius(lifted, block2(X, Y, Y, X), accuracy=accuracy)
        rhs = max(a_num_radius(metric, X + Y, accuracy=accuracy), a_num_radius(metric, X - Y, accuracy=accuracy))
    elif part == "rotation_norm":
        lhs = a_num_radius(lifted, block_offdiag(X, Y), accuracy=accuracy)
        rhs = 0.5 * _rotation_sup_norm(metric, X, sharp(metric, Y), accuracy)
    elif part == "norm_max":
        n_diag = a_seminorm(lifted, block_diag(X, Y))
        n_off = a_seminorm(lifted, block_offdiag(X, Y))
        n_max = max(a_seminorm(metric, X), a_seminorm(metric, Y))
        lhs, rhs = n_off, n_max
        residual = max(abs(n_diag - n_max), abs(n_off - n_max))
    else:
        left = sharp(lifted, block2(X, Y, Z, W))
        right = block2(sharp(metric, X), sharp(metric, Z), sharp(metric, Y), sharp(metric, W))
        lhs, rhs = op_norm(left), op_norm(right)
        residual = op_norm(left - right)

    return finish_record(
        theorem_id,
        residuals,
        float(lhs),
        float(rhs),
        tol,
        seed=seed,
        kind="equality",
        residual=residual,
    )


def offdiag_abs_check(
    metric: Metric,
    X: np.ndarray,
    Y: np.ndarray,
    tol: float = 1e-8,
    seed: int = 0,
) -> CheckRecord:
    """Verify |[[0, X], [Y, 0]]| = diag(|Y|, |X|) in the lifted metric.

    Purely algebraic, so no membership hypothesis is needed.
    """
    X = metric.check_operator(X)
    Y = metric.check_operator(Y)
    lifted = BlockMetric(metric, 2).lifted
    left = a_abs(lifted, block_offdiag(X, Y))
    right = block_diag(a_abs(metric, Y), a_abs(metric, X))
    return finish_record(
        "BLOCK_ABS_DIAG",
        {},
        float(op_norm(left)),
        float(op_norm(right)),
        tol,
        seed=seed,
        kind="equality",
        residual=float(op_norm(left - right)),
    )
