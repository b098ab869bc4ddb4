"""Seeded generators for metrics and hypothesis-satisfying operand tuples.

Hypotheses such as the intertwining relation hold only on measure-zero
sets, so rejection sampling of dense Gaussian draws can never hit them.
Every structured family is instead built directly in the eigenbasis of
the metric, and the defining residual is re-measured before returning,
so a bad draw cannot leak into a campaign.

Reproducibility: all randomness flows through Philox, a counter-based
generator, keyed per draw as ``mix64(master_seed, index)`` where mix64
is the SplitMix64 finalizer. Draws are pure functions of (config, seed),
so campaigns can run trials in any order, or in parallel, and still
reproduce a serial run bitwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.linalg as npl

from .catalog import THEOREMS, hypothesis_residuals, nxn_names
from .errors import BadConfig, BadFamily, GenerationFailed, UnknownTheorem
from .linalg import hermitianize, op_norm
from .metric import Metric, a_abs, in_b_a, sharp

FAMILIES = (
    "FREE",
    "MEMBER",
    "COMMUTING",
    "PSD_COMMUTING",
    "A_SELFADJOINT",
    "INTERTWINING_PAIR",
)

MAX_DIM = 8
RESIDUAL_TOL = 1e-10

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(seed: int, index: int) -> int:
    """SplitMix64 finalizer of ``seed`` advanced ``index`` steps.

    Collapses a (master seed, draw index) pair into a single well-mixed
    64-bit key, so per-trial streams are independent of trial order.
    """
    z = (int(seed) + int(index) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def trial_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Counter-based generator keyed by ``mix64(seed, index)``."""
    return np.random.Generator(np.random.Philox(key=mix64(seed, index)))


@dataclass(frozen=True)
class GenConfig:
    """Shape of one generated instance: metric geometry plus a seed.

    ``metric_rank`` defaults to full rank; ``repeat_eigs`` duplicates the
    two largest metric eigenvalues so commutant blocks become genuinely
    non-diagonal; ``blocks`` sets the grid size for the k x k entries.
    """

    dim: int = 3
    metric_rank: int | None = None
    eigen_spread: tuple[float, float] = (0.1, 10.0)
    family: str = "FREE"
    seed: int = 0
    repeat_eigs: bool = False
    blocks: int = 3

    def __post_init__(self) -> None:
        if not isinstance(self.dim, int) or not 1 <= self.dim <= MAX_DIM:
            raise BadConfig(f"dim must be an integer in 1..{MAX_DIM}, got {self.dim!r}")
        if self.metric_rank is not None and not isinstance(self.metric_rank, int):
            raise BadConfig(f"metric_rank must be an integer, got {self.metric_rank!r}")
        if not 1 <= self.rank <= self.dim:
            raise BadConfig(f"metric_rank must lie in 1..{self.dim}, got {self.metric_rank!r}")
        try:
            lo, hi = (float(v) for v in self.eigen_spread)
        except (TypeError, ValueError) as exc:
            raise BadConfig(f"eigen_spread must be a pair of numbers, got {self.eigen_spread!r}") from exc
        if not (0.0 < lo <= hi) or not np.isfinite(hi):
            raise BadConfig(f"eigen_spread must be a positive interval, got {self.eigen_spread!r}")
        if self.family not in FAMILIES:
            raise BadConfig(f"unknown family {self.family!r}")
        if not isinstance(self.blocks, int) or not 1 <= self.blocks <= 9:
            raise BadConfig(f"blocks must be an integer in 1..9, got {self.blocks!r}")
        if not isinstance(self.seed, int):
            raise BadConfig(f"seed must be an integer, got {self.seed!r}")

    @property
    def rank(self) -> int:
        return self.dim if self.metric_rank is None else self.metric_rank


def _ginibre(rng: np.random.Generator, n: int) -> np.ndarray:
    return (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2.0)


def _haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """QR of a complex Gaussian sample with the R diagonal phase fixed."""
    Q, R = npl.qr(_ginibre(rng, n))
    d = np.diagonal(R).copy()
    d[d == 0] = 1.0
    return Q * (d / np.abs(d))


def gen_metric(config: GenConfig) -> Metric:
    """Haar-conjugated diagonal metric, deterministic in ``config.seed``."""
    rng = trial_rng(config.seed)
    vals = np.zeros(config.dim)
    draws = rng.uniform(config.eigen_spread[0], config.eigen_spread[1], size=config.rank)
    draws = np.sort(draws)[::-1]
    if config.repeat_eigs and config.rank >= 2:
        draws[1] = draws[0]
    vals[: config.rank] = draws
    Q = _haar_unitary(rng, config.dim)
    return Metric(hermitianize((Q * vals) @ Q.conj().T))


def _eigen_groups(w: np.ndarray, tau: float) -> list[np.ndarray]:
    """Split descending eigenvalues into tau-close index groups."""
    edges = [0]
    for i in range(1, w.size):
        if w[i - 1] - w[i] > tau:
            edges.append(i)
    edges.append(w.size)
    return [np.arange(a, b) for a, b in zip(edges[:-1], edges[1:])]


def _scaled(value: float, *mats: np.ndarray) -> float:
    prod = 1.0
    for M in mats:
        prod *= op_norm(M)
    return value / max(1.0, prod)


def _check(family: str, residual: float) -> None:
    if not residual <= RESIDUAL_TOL:
        raise GenerationFailed(f"{family} draw has residual {residual:.3e}")


def _member(rng: np.random.Generator, metric: Metric) -> np.ndarray:
    U = metric.eig.basis
    ker = metric.eig.eigenvalues <= metric.tau
    B = _ginibre(rng, metric.dim)
    B[np.ix_(~ker, ker)] = 0.0
    T = U @ B @ U.conj().T
    _check("MEMBER", _scaled(in_b_a(metric, T).residual, T))
    return T


def _commuting(rng: np.random.Generator, metric: Metric, psd: bool) -> np.ndarray:
    U = metric.eig.basis
    B = np.zeros((metric.dim, metric.dim), dtype=np.complex128)
    for idx in _eigen_groups(metric.eig.eigenvalues, metric.tau):
        G = _ginibre(rng, idx.size)
        if psd:
            G = G @ G.conj().T / idx.size
        B[np.ix_(idx, idx)] = G
    T = U @ B @ U.conj().T
    if psd:
        T = hermitianize(T)
    name = "PSD_COMMUTING" if psd else "COMMUTING"
    _check(name, _scaled(op_norm(metric.A @ T - T @ metric.A), metric.A, T))
    return T


def _a_selfadjoint(rng: np.random.Generator, metric: Metric) -> np.ndarray:
    U = metric.eig.basis
    ker = metric.eig.eigenvalues <= metric.tau
    B = hermitianize(_ginibre(rng, metric.dim))
    B[ker, :] = 0.0
    B[:, ker] = 0.0
    T = metric.pinv @ (U @ B @ U.conj().T)
    M = metric.A @ T
    _check("A_SELFADJOINT", _scaled(op_norm(M - M.conj().T), M))
    return T


def _intertwining_pair(rng: np.random.Generator, metric: Metric) -> tuple[np.ndarray, np.ndarray]:
    U = metric.eig.basis
    ker = metric.eig.eigenvalues <= metric.tau
    n = metric.dim
    # keep |x| away from 0 so the eigenvalues of the absolute value stay
    # separated from the kernel cluster; the square root otherwise turns
    # 1e-16 product noise into 1e-8 structure
    x = rng.uniform(0.5, 1.5, size=n) * np.exp(2j * np.pi * rng.uniform(size=n))
    y = rng.normal(size=n).astype(np.complex128)
    # a nonzero kernel diagonal of Y would surface the same noise in the
    # defining residual, so Y annihilates the kernel outright
    y[ker] = 0.0
    X = (U * x) @ U.conj().T
    Y = (U * y) @ U.conj().T
    absx = a_abs(metric, X)
    _check(
        "INTERTWINING_PAIR",
        _scaled(op_norm(absx @ Y - sharp(metric, Y) @ absx), X, Y),
    )
    return X, Y


def gen_operand(family: str, metric: Metric, seed: int):
    """One operand (or pair) from the named family, deterministic in seed.

    Every non-FREE family re-measures its defining residual before
    returning and raises GenerationFailed on the (never observed) event
    that the construction missed.
    """
    rng = trial_rng(seed)
    if family == "FREE":
        return _ginibre(rng, metric.dim)
    if family == "MEMBER":
        return _member(rng, metric)
    if family == "COMMUTING":
        return _commuting(rng, metric, psd=False)
    if family == "PSD_COMMUTING":
        return _commuting(rng, metric, psd=True)
    if family == "A_SELFADJOINT":
        return _a_selfadjoint(rng, metric)
    if family == "INTERTWINING_PAIR":
        return _intertwining_pair(rng, metric)
    raise BadFamily(f"unknown family {family!r}")


_PAIR_NAMES = {
    "PROD_XY": ("X", "Y"),
    "PROD_XY_COR": ("X", "Y"),
    "MIXED_SCHWARZ_TS": ("T", "S"),
}

_PLAIN_FAMILIES = {
    "MCCARTHY": (("T", "PSD_COMMUTING"),),
    "TRIPLE": (("X", "PSD_COMMUTING"), ("T", "MEMBER"), ("Y", "PSD_COMMUTING")),
    "BUZANO": (),
    "POWER_2R": (("T", "MEMBER"),),
    "MIXED_SCHWARZ_T": (("T", "COMMUTING"),),
    "POWER_2R_FG": (("T", "COMMUTING"),),
    "OFFDIAG_FG": (("X", "COMMUTING"), ("Y", "COMMUTING")),
    "OFFDIAG_SANDWICH": (("X", "COMMUTING"), ("Y", "COMMUTING")),
    "OFFDIAG_2FG": (("X", "COMMUTING"), ("Y", "COMMUTING")),
    "OFFDIAG_2FG_COR": (("X", "COMMUTING"), ("Y", "COMMUTING")),
    "FULL_NORM": (("X", "MEMBER"), ("Y", "MEMBER"), ("Z", "MEMBER"), ("W", "MEMBER")),
    "FULL_W_1": (("X", "MEMBER"), ("Y", "MEMBER"), ("Z", "MEMBER"), ("W", "MEMBER")),
    "FULL_W_1_COR": (("X", "MEMBER"), ("Y", "MEMBER")),
    "FULL_W_2": (("X", "MEMBER"), ("Y", "MEMBER"), ("Z", "MEMBER"), ("W", "MEMBER")),
    "FULL_W_2_COR": (("X", "MEMBER"), ("Y", "MEMBER")),
    "EQUIV": (("T", "MEMBER"),),
}


def instance_families(theorem_id: str, blocks: int = 3) -> tuple[tuple[str, str], ...]:
    """The (operand name, family) plan used for a registry entry."""
    if theorem_id not in THEOREMS:
        raise UnknownTheorem(theorem_id)
    if theorem_id in _PAIR_NAMES:
        a, b = _PAIR_NAMES[theorem_id]
        return ((a, "INTERTWINING_PAIR"), (b, "INTERTWINING_PAIR"))
    if THEOREMS[theorem_id].nxn:
        return tuple((name, "COMMUTING") for name in nxn_names(blocks))
    return _PLAIN_FAMILIES[theorem_id]


def gen_instance(theorem_id: str, config: GenConfig, metric: Metric | None = None) -> dict:
    """Named operand map for a registry entry, hypotheses holding by build.

    Pass the metric from ``gen_metric(config)`` to avoid recomputing it;
    operand streams are keyed by ``mix64(config.seed, position + 1)``, so
    the map is bitwise reproducible either way.
    """
    if theorem_id not in THEOREMS:
        raise UnknownTheorem(theorem_id)
    if metric is None:
        metric = gen_metric(config)
    ops: dict[str, np.ndarray] = {}
    if theorem_id in _PAIR_NAMES:
        a, b = _PAIR_NAMES[theorem_id]
        ops[a], ops[b] = gen_operand("INTERTWINING_PAIR", metric, mix64(config.seed, 1))
    elif THEOREMS[theorem_id].nxn:
        for j, name in enumerate(nxn_names(config.blocks)):
            ops[name] = gen_operand("COMMUTING", metric, mix64(config.seed, j + 1))
    else:
        for j, (name, family) in enumerate(_PLAIN_FAMILIES[theorem_id]):
            ops[name] = gen_operand(family, metric, mix64(config.seed, j + 1))
    residuals = hypothesis_residuals(theorem_id, metric, ops)
    worst = max(residuals.values(), default=0.0)
    if not worst <= RESIDUAL_TOL:
        raise GenerationFailed(f"{theorem_id} instance has hypothesis residual {worst:.3e}")
    return ops
