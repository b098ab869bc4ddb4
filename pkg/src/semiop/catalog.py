"""The bound registry: every inequality encoded as an evaluable check.

Each entry knows its operand names, hypothesis clauses, and both sides.
``evaluate`` verifies hypotheses first (failures give a skipped record,
never an error), then computes LHS and RHS by composing the seminormed
operator quantities and the lifted block metric. Bounds quantified over
vectors are checked pointwise on sampled tuples and report the worst
tuple. Corollary entries evaluate their parent entry at the specialized
parameters and operands, so specialization consistency is exact by
construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np
import numpy.linalg as npl

from ._records import BoundParams, CheckRecord, ScalarFnPair, finish_record
from .blocks import BlockMetric, block2, block_offdiag, blockn
from .errors import BadParams, UnknownTheorem
from .linalg import herm_eig, hermitianize, num_radius, op_norm, psd_fn
from .metric import (
    Metric,
    a_num_radius,
    a_seminorm,
    a_spec_radius,
    a_unit_batch,
    a_vector_batch,
    in_b_a,
    sharp,
)

HYP_TOL = 1e-8
DEFAULT_SAMPLES = 2000


@dataclass(frozen=True)
class TheoremInfo:
    """Registry metadata: operand signature and evaluation shape."""

    theorem_id: str
    operands: tuple[str, ...]
    fn_slots: int = 0
    sampled: bool = False
    kind: str = "inequality"
    parent: str | None = None
    nxn: bool = False


THEOREMS: dict[str, TheoremInfo] = {
    info.theorem_id: info
    for info in (
        TheoremInfo("MCCARTHY", ("T",), sampled=True),
        TheoremInfo("MIXED_SCHWARZ_TS", ("T", "S"), fn_slots=1, sampled=True),
        TheoremInfo("PROD_XY", ("X", "Y"), fn_slots=1),
        TheoremInfo("PROD_XY_COR", ("X", "Y"), parent="PROD_XY"),
        TheoremInfo("TRIPLE", ("X", "T", "Y")),
        TheoremInfo("BUZANO", (), sampled=True),
        TheoremInfo("POWER_2R", ("T",)),
        TheoremInfo("MIXED_SCHWARZ_T", ("T",), fn_slots=1, sampled=True),
        TheoremInfo("POWER_2R_FG", ("T",), fn_slots=1),
        TheoremInfo("OFFDIAG_FG", ("X", "Y"), fn_slots=1),
        TheoremInfo("OFFDIAG_SANDWICH", ("X", "Y"), kind="two_sided"),
        TheoremInfo("OFFDIAG_2FG", ("X", "Y"), fn_slots=2),
        TheoremInfo("OFFDIAG_2FG_COR", ("X", "Y"), parent="OFFDIAG_2FG"),
        TheoremInfo("FULL_NORM", ("X", "Y", "Z", "W")),
        TheoremInfo("FULL_W_1", ("X", "Y", "Z", "W")),
        TheoremInfo("FULL_W_1_COR", ("X", "Y"), parent="FULL_W_1"),
        TheoremInfo("FULL_W_2", ("X", "Y", "Z", "W")),
        TheoremInfo("FULL_W_2_COR", ("X", "Y"), parent="FULL_W_2"),
        TheoremInfo("NXN_S", (), fn_slots=1, nxn=True),
        TheoremInfo("NXN_R", (), fn_slots=1, nxn=True),
        TheoremInfo("NXN_R_COR", (), parent="NXN_R", nxn=True),
        TheoremInfo("EQUIV", ("T",), kind="two_sided"),
    )
}

THEOREM_IDS: tuple[str, ...] = tuple(THEOREMS)

_NXN_NAME = re.compile(r"^T([1-9])([1-9])$")


def nxn_names(k: int) -> tuple[str, ...]:
    """Operand names for a k x k block instance: T11, T12, ..., Tkk."""
    if not 1 <= k <= 9:
        raise BadParams(f"block grid size must be 1..9, got {k}")
    return tuple(f"T{i}{j}" for i in range(1, k + 1) for j in range(1, k + 1))


def _nxn_grid(operands: dict[str, np.ndarray]) -> list[list[np.ndarray]]:
    slots = {}
    for name in operands:
        match = _NXN_NAME.match(name)
        if match is None:
            raise BadParams(f"block operand names must look like T23, got {name!r}")
        slots[(int(match.group(1)), int(match.group(2)))] = operands[name]
    k = max(i for i, _ in slots) if slots else 0
    if len(slots) != k * k or k == 0:
        raise BadParams(f"expected a complete {k} x {k} grid of blocks, got {len(slots)} entries")
    return [[slots[(i, j)] for j in range(1, k + 1)] for i in range(1, k + 1)]


def default_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


# -- hypothesis residuals ----------------------------------------------------

def _member_res(metric: Metric, name: str, M: np.ndarray, out: dict[str, float]) -> bool:
    cert = in_b_a(metric, M)
    out[f"member_{name}"] = cert.residual / max(1.0, op_norm(M))
    return cert.member


def _commute_res(metric: Metric, name: str, M: np.ndarray, out: dict[str, float]) -> None:
    out[f"commute_{name}"] = op_norm(metric.A @ M - M @ metric.A) / max(1.0, op_norm(M))


def _hermitian_res(name: str, M: np.ndarray, out: dict[str, float]) -> None:
    out[f"hermitian_{name}"] = op_norm(M - M.conj().T) / max(1.0, op_norm(M))


def _psd_res(name: str, M: np.ndarray, out: dict[str, float]) -> None:
    H = hermitianize(M)
    lam_min = float(herm_eig(H).eigenvalues[-1]) if H.size else 0.0
    out[f"psd_{name}"] = max(0.0, -lam_min) / max(1.0, op_norm(M))


def _intertwine_res(
    metric: Metric, nx: str, ny: str, X: np.ndarray, Y: np.ndarray, out: dict[str, float]
) -> None:
    # the relation |X|_A Y = Y^sharp |X|_A only matters inside A-inner
    # products, so it is measured in compression coordinates, where the
    # two sides become |C_X| C_Y and C_Y* |C_X|
    Cx = _compressed(metric, X)
    Cy = _compressed(metric, Y)
    absX = psd_fn(hermitianize(Cx.conj().T @ Cx), np.sqrt)
    diff = absX @ Cy - Cy.conj().T @ absX
    out[f"intertwine_{nx}{ny}"] = op_norm(diff) / max(1.0, op_norm(X) * op_norm(Y))


def _collect_residuals(
    theorem_id: str, metric: Metric, ops: dict[str, np.ndarray]
) -> tuple[dict[str, float], bool]:
    """Residuals plus a flag saying every needed membership is certified.

    Membership certification uses a tighter gate than the generic
    hypothesis one; the flag keeps borderline operands from reaching an
    evaluator that would reject them.
    """
    info = THEOREMS[theorem_id]
    out: dict[str, float] = {}
    certs: list[bool] = []

    def member(name: str) -> bool:
        ok = _member_res(metric, name, ops[name], out)
        certs.append(ok)
        return ok

    if info.nxn:
        _nxn_grid(ops)
        for name in sorted(ops):
            member(name)
            _commute_res(metric, name, ops[name], out)
        return out, all(certs)

    missing = set(info.operands) - set(ops)
    if missing:
        raise BadParams(f"{theorem_id} needs operands {sorted(missing)}")

    if theorem_id == "MCCARTHY":
        T = ops["T"]
        member("T")
        _hermitian_res("T", T, out)
        _psd_res("T", T, out)
        _commute_res(metric, "T", T, out)
    elif theorem_id == "MIXED_SCHWARZ_TS":
        member("T")
        member("S")
        _commute_res(metric, "T", ops["T"], out)
        _intertwine_res(metric, "T", "S", ops["T"], ops["S"], out)
    elif theorem_id in ("PROD_XY", "PROD_XY_COR"):
        member("X")
        member("Y")
        _commute_res(metric, "X", ops["X"], out)
        _intertwine_res(metric, "X", "Y", ops["X"], ops["Y"], out)
    elif theorem_id == "TRIPLE":
        for name in ("X", "T", "Y"):
            member(name)
        for name in ("X", "Y"):
            _hermitian_res(name, ops[name], out)
            _psd_res(name, ops[name], out)
            _commute_res(metric, name, ops[name], out)
    elif theorem_id == "BUZANO":
        pass
    elif theorem_id in ("POWER_2R", "EQUIV"):
        member("T")
    elif theorem_id in ("MIXED_SCHWARZ_T", "POWER_2R_FG"):
        member("T")
        _commute_res(metric, "T", ops["T"], out)
    elif theorem_id in ("OFFDIAG_FG", "OFFDIAG_SANDWICH", "OFFDIAG_2FG", "OFFDIAG_2FG_COR"):
        for name in ("X", "Y"):
            member(name)
            _commute_res(metric, name, ops[name], out)
    elif theorem_id in ("FULL_NORM", "FULL_W_1", "FULL_W_2"):
        for name in ("X", "Y", "Z", "W"):
            member(name)
    elif theorem_id in ("FULL_W_1_COR", "FULL_W_2_COR"):
        for name in ("X", "Y"):
            member(name)
    else:  # pragma: no cover - registry and dispatch stay in sync
        raise UnknownTheorem(theorem_id)
    return out, all(certs)


def hypothesis_residuals(
    theorem_id: str, metric: Metric, operands: dict[str, np.ndarray]
) -> dict[str, float]:
    """One named, scale-normalized residual per hypothesis clause.

    Every residual is computable for arbitrary operands; nothing here
    raises on a hypothesis failure, so unconstrained fuzzing yields
    skipped records instead of errors.
    """
    if theorem_id not in THEOREMS:
        raise UnknownTheorem(f"unknown theorem id {theorem_id!r}")
    ops = {name: metric.check_operator(M) for name, M in operands.items()}
    return _collect_residuals(theorem_id, metric, ops)[0]


# -- shared evaluation helpers ----------------------------------------------

def _compressed(metric: Metric, M: np.ndarray) -> np.ndarray:
    """Raw compression sqrt(A) M sqrt(A)^+, with no membership gate.

    Every deformed quantity of M is a classical quantity of this matrix,
    so scalar functions of the deformed absolute values are evaluated
    here: |M|_A acts as the classical |compressed M| on the range of A,
    and |M^sharp|_A as its transpose-side partner.
    """
    return metric.sqrt @ M @ metric.sqrt_pinv


def _abs_factors(C: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Classical (C* C)^(1/2) and (C C*)^(1/2) of a compression."""
    return (
        psd_fn(hermitianize(C.conj().T @ C), np.sqrt),
        psd_fn(hermitianize(C @ C.conj().T), np.sqrt),
    )


def _quad_forms(M: np.ndarray, V: np.ndarray) -> np.ndarray:
    """x_k^* M x_k for every column x_k of V."""
    return np.einsum("ik,ij,jk->k", V.conj(), M, V)


def _real_clamped(vals: np.ndarray) -> np.ndarray:
    return np.maximum(vals.real, 0.0)


def _a_norms(metric: Metric, V: np.ndarray) -> np.ndarray:
    return np.sqrt(_real_clamped(_quad_forms(metric.A, V)))


def _fn_of(M_psd: np.ndarray, vals, power: float = 1.0) -> np.ndarray:
    return psd_fn(M_psd, lambda t: vals(t, power))


def _spectrum(M_psd: np.ndarray) -> np.ndarray:
    return herm_eig(hermitianize(M_psd)).eigenvalues


def _validate_pair(pair: ScalarFnPair, *psd_mats: np.ndarray) -> None:
    if psd_mats:
        pair.validate_on(np.concatenate([_spectrum(M) for M in psd_mats]))


def _power(x: float, e: float) -> float:
    return float(np.power(max(x, 0.0), e))


# -- evaluators --------------------------------------------------------------

def _eval_mccarthy(metric, ops, params, fns, rng, samples, accuracy):
    T = hermitianize(ops["T"])
    r = params.r
    Tr = psd_fn(T, lambda t: np.power(t, r))
    V = a_unit_batch(metric, rng, samples)
    base = _real_clamped(_quad_forms(metric.A @ T, V))
    powed = _real_clamped(_quad_forms(metric.A @ Tr, V))
    if r >= 1.0:
        lhs_all, rhs_all = np.power(base, r), powed
    else:
        lhs_all, rhs_all = powed, np.power(base, r)
    i = int(np.argmin(rhs_all - lhs_all))
    return float(lhs_all[i]), float(rhs_all[i]), None, "inequality"


def _eval_buzano(metric, ops, params, fns, rng, samples, accuracy):
    a = a_vector_batch(metric, rng, samples)
    b = a_vector_batch(metric, rng, samples)
    e = a_unit_batch(metric, rng, samples)
    A = metric.A
    ae = np.einsum("ik,ij,jk->k", e.conj(), A, a)
    eb = np.einsum("ik,ij,jk->k", b.conj(), A, e)
    ab = np.einsum("ik,ij,jk->k", b.conj(), A, a)
    lhs_all = np.abs(ae * eb)
    rhs_all = 0.5 * (np.abs(ab) + _a_norms(metric, a) * _a_norms(metric, b))
    i = int(np.argmin(rhs_all - lhs_all))
    return float(lhs_all[i]), float(rhs_all[i]), None, "inequality"


def _eval_mixed_schwarz(metric, ops, params, fns, rng, samples, accuracy, with_s):
    T = ops["T"]
    pair = fns[0]
    abs_c, abs_ch = _abs_factors(_compressed(metric, T))
    _validate_pair(pair, abs_c, abs_ch)
    F = _fn_of(abs_c, pair.f_vals)
    G = _fn_of(abs_ch, pair.g_vals)
    A = metric.A
    if with_s:
        target = A @ (T @ ops["S"])
        coef = a_spec_radius(metric, ops["S"])
    else:
        target = A @ T
        coef = 1.0
    x = a_vector_batch(metric, rng, samples)
    y = a_vector_batch(metric, rng, samples)
    lhs_all = np.abs(np.einsum("ik,ij,jk->k", y.conj(), target, x))
    # ||f(|T|_A) x||_A is the plain norm of f(|C|) applied in compression
    # coordinates u = sqrt(A) x
    fx = npl.norm(F @ (metric.sqrt @ x), axis=0)
    gy = npl.norm(G @ (metric.sqrt @ y), axis=0)
    rhs_all = coef * fx * gy
    i = int(np.argmin(rhs_all - lhs_all))
    return float(lhs_all[i]), float(rhs_all[i]), None, "inequality"


def _eval_prod_xy(metric, ops, params, fns, rng, samples, accuracy):
    X, Y = ops["X"], ops["Y"]
    pair = fns[0]
    r, al, be = params.r, params.alpha2, params.beta2
    lhs = a_num_radius(metric, X @ Y, accuracy=accuracy)
    abs_c, abs_ch = _abs_factors(_compressed(metric, X))
    _validate_pair(pair, abs_c, abs_ch)
    M = _fn_of(abs_c, pair.f_vals, 2.0 * r * al) / al + _fn_of(abs_ch, pair.g_vals, 2.0 * r * be) / be
    rhs = a_spec_radius(metric, Y) * _power(op_norm(M), 1.0 / (2.0 * r))
    return lhs, rhs, None, "inequality"


def _eval_triple(metric, ops, params, fns, rng, samples, accuracy):
    X, T, Y = hermitianize(ops["X"]), ops["T"], hermitianize(ops["Y"])
    r, p, q, al = params.r, params.p, params.q, params.alpha
    Xa = psd_fn(X, lambda t: np.power(t, al))
    Ya = psd_fn(Y, lambda t: np.power(t, al))
    lhs = _power(a_num_radius(metric, Xa @ T @ Ya, accuracy=accuracy), r)
    M = psd_fn(X, lambda t: np.power(t, p * r)) / p + psd_fn(Y, lambda t: np.power(t, q * r)) / q
    rhs = _power(a_seminorm(metric, T), r) * _power(a_seminorm(metric, M), al)
    return lhs, rhs, None, "inequality"


def _eval_power_2r(metric, ops, params, fns, rng, samples, accuracy):
    T = ops["T"]
    r = params.r
    S = sharp(metric, T)
    lhs = _power(a_num_radius(metric, T, accuracy=accuracy), 2.0 * r)
    rhs = 0.5 * _power(a_num_radius(metric, T @ T, accuracy=accuracy), r) + 2.0 ** (
        -(r + 1.0)
    ) * _power(a_seminorm(metric, T @ S + S @ T), r)
    return lhs, rhs, None, "inequality"


def _eval_power_2r_fg(metric, ops, params, fns, rng, samples, accuracy):
    T = ops["T"]
    pair = fns[0]
    r, p, q = params.r, params.p, params.q
    S = sharp(metric, T)
    abs_2, abs_2h = _abs_factors(_compressed(metric, T @ T))
    _validate_pair(pair, abs_2, abs_2h)
    lhs = _power(a_num_radius(metric, T, accuracy=accuracy), 2.0 * r)
    inner = op_norm(_fn_of(abs_2, pair.f_vals, p * r) / p + _fn_of(abs_2h, pair.g_vals, q * r) / q)
    rhs = 0.5 * (2.0 ** (-r) * _power(a_seminorm(metric, T @ S + S @ T), r) + inner)
    return lhs, rhs, None, "inequality"


def _offdiag_fg_rhs(metric, X, Y, pair, p, q, r):
    abs_x, abs_xh = _abs_factors(_compressed(metric, X))
    abs_y, abs_yh = _abs_factors(_compressed(metric, Y))
    _validate_pair(pair, abs_x, abs_y, abs_xh, abs_yh)
    first = op_norm(_fn_of(abs_y, pair.f_vals, p * r) / p + _fn_of(abs_xh, pair.g_vals, q * r) / q)
    second = op_norm(_fn_of(abs_x, pair.f_vals, p * r) / p + _fn_of(abs_yh, pair.g_vals, q * r) / q)
    return max(first, second)


def _eval_offdiag_fg(metric, ops, params, fns, rng, samples, accuracy):
    X, Y = ops["X"], ops["Y"]
    r = params.r
    lifted = BlockMetric(metric, 2).lifted
    lhs = _power(a_num_radius(lifted, block_offdiag(X, Y), accuracy=accuracy), r)
    rhs = _offdiag_fg_rhs(metric, X, Y, fns[0], params.p, params.q, r)
    return lhs, rhs, None, "inequality"


def _eval_offdiag_sandwich(metric, ops, params, fns, rng, samples, accuracy):
    X, Y = ops["X"], ops["Y"]
    lifted = BlockMetric(metric, 2).lifted
    lower = 0.5 * a_seminorm(metric, X + sharp(metric, Y))
    lhs = a_num_radius(lifted, block_offdiag(X, Y), accuracy=accuracy)
    rhs = _offdiag_fg_rhs(metric, X, Y, ScalarFnPair.power(0.5), 2.0, 2.0, 1.0)
    return lhs, rhs, lower, "two_sided"


def _eval_offdiag_2fg(metric, ops, params, fns, rng, samples, accuracy):
    X, Y = ops["X"], ops["Y"]
    pair1, pair2 = fns[0], fns[1]
    r = params.r
    lifted = BlockMetric(metric, 2).lifted
    lhs = _power(a_num_radius(lifted, block_offdiag(X, Y), accuracy=accuracy), r)
    abs_x, abs_xh = _abs_factors(_compressed(metric, X))
    abs_y, abs_yh = _abs_factors(_compressed(metric, Y))
    _validate_pair(pair1, abs_x, abs_xh)
    _validate_pair(pair2, abs_y, abs_yh)
    first = op_norm(_fn_of(abs_x, pair1.f_vals, 2.0 * r) + _fn_of(abs_yh, pair2.g_vals, 2.0 * r))
    second = op_norm(_fn_of(abs_y, pair2.f_vals, 2.0 * r) + _fn_of(abs_xh, pair1.g_vals, 2.0 * r))
    rhs = (2.0 ** r / 4.0) * np.sqrt(max(first, 0.0)) * np.sqrt(max(second, 0.0))
    return lhs, float(rhs), None, "inequality"


def _eval_full_norm(metric, ops, params, fns, rng, samples, accuracy):
    X, Y, Z, W = (ops[k] for k in ("X", "Y", "Z", "W"))
    lifted = BlockMetric(metric, 2).lifted
    lhs = a_seminorm(lifted, block2(X, Y, Z, W)) ** 2
    nx, ny, nz, nw = (a_seminorm(metric, M) for M in (X, Y, Z, W))
    cross = a_num_radius(
        lifted, block_offdiag(sharp(metric, Z) @ W, sharp(metric, Y) @ X), accuracy=accuracy
    )
    rhs = max(nx**2, nw**2) + max(nx, nw) * max(ny, nz) + max(ny**2, nz**2) + cross
    return float(lhs), float(rhs), None, "inequality"


def _eval_full_w_1(metric, ops, params, fns, rng, samples, accuracy):
    X, Y, Z, W = (ops[k] for k in ("X", "Y", "Z", "W"))
    lifted = BlockMetric(metric, 2).lifted
    sx, sy, sz, sw = (sharp(metric, M) for M in (X, Y, Z, W))
    lhs = a_num_radius(lifted, block2(X, Y, Z, W), accuracy=accuracy) ** 2
    t1 = max(a_num_radius(metric, X, accuracy=accuracy) ** 2, a_num_radius(metric, W, accuracy=accuracy) ** 2)
    t2 = a_num_radius(lifted, block_offdiag(Y, Z), accuracy=accuracy) ** 2
    t3 = a_num_radius(lifted, block_offdiag(sz @ W, sy @ X), accuracy=accuracy)
    t4 = 0.5 * max(a_seminorm(metric, sx @ X + sz @ Z), a_seminorm(metric, sw @ W + sy @ Y))
    return float(lhs), float(t1 + t2 + t3 + t4), None, "inequality"


def _eval_full_w_2(metric, ops, params, fns, rng, samples, accuracy):
    X, Y, Z, W = (ops[k] for k in ("X", "Y", "Z", "W"))
    lifted = BlockMetric(metric, 2).lifted
    sx, sy, sz, sw = (sharp(metric, M) for M in (X, Y, Z, W))
    lhs = a_num_radius(lifted, block2(X, Y, Z, W), accuracy=accuracy) ** 2
    t1 = max(a_num_radius(metric, X, accuracy=accuracy) ** 2, a_num_radius(metric, W, accuracy=accuracy) ** 2)
    t2 = 0.5 * max(a_num_radius(metric, Y @ Z, accuracy=accuracy), a_num_radius(metric, Z @ Y, accuracy=accuracy))
    t3 = a_num_radius(lifted, block_offdiag(Y @ W, Z @ X), accuracy=accuracy)
    t4 = 0.25 * max(a_seminorm(metric, Y @ sy + sz @ Z), a_seminorm(metric, sy @ Y + Z @ sz))
    t5 = 0.5 * max(a_seminorm(metric, sx @ X + Y @ sy), a_seminorm(metric, sw @ W + Z @ sz))
    return float(lhs), float(t1 + t2 + t3 + t4 + t5), None, "inequality"


def _eval_nxn(metric, ops, params, fns, rng, samples, accuracy, diag_half):
    grid = _nxn_grid(ops)
    k = len(grid)
    pair = fns[0]
    lifted = BlockMetric(metric, k).lifted
    lhs = a_num_radius(lifted, blockn(grid), accuracy=accuracy)
    scalar = np.zeros((k, k))
    for i in range(k):
        for j in range(k):
            block = grid[i][j]
            abs_b, abs_bh = _abs_factors(_compressed(metric, block))
            _validate_pair(pair, abs_b, abs_bh)
            if diag_half and i == j:
                scalar[i, i] = 0.5 * op_norm(
                    _fn_of(abs_b, pair.f_vals, 2.0) + _fn_of(abs_bh, pair.g_vals, 2.0)
                )
            else:
                scalar[i, j] = op_norm(_fn_of(abs_b, pair.f_vals)) * op_norm(
                    _fn_of(abs_bh, pair.g_vals)
                )
    rhs = num_radius(scalar, accuracy=accuracy)
    return float(lhs), float(rhs), None, "inequality"


def _eval_equiv(metric, ops, params, fns, rng, samples, accuracy):
    T = ops["T"]
    sn = a_seminorm(metric, T)
    lhs = a_num_radius(metric, T, accuracy=accuracy)
    return float(lhs), float(sn), 0.5 * sn, "two_sided"


def _validate_params(theorem_id: str, params: BoundParams) -> None:
    if theorem_id in ("PROD_XY", "PROD_XY_COR", "OFFDIAG_2FG", "OFFDIAG_2FG_COR", "POWER_2R"):
        params.require(r=1.0)
    elif theorem_id == "TRIPLE":
        params.require(pr=2.0, qr=2.0)
    elif theorem_id in ("POWER_2R_FG", "OFFDIAG_FG"):
        params.require(r=1.0, pr=2.0, qr=2.0)


def _dispatch(theorem_id, metric, ops, params, fns, rng, samples, accuracy):
    if theorem_id == "MCCARTHY":
        return _eval_mccarthy(metric, ops, params, fns, rng, samples, accuracy)
    if theorem_id == "BUZANO":
        return _eval_buzano(metric, ops, params, fns, rng, samples, accuracy)
    if theorem_id == "MIXED_SCHWARZ_TS":
        return _eval_mixed_schwarz(metric, ops, params, fns, rng, samples, accuracy, with_s=True)
    if theorem_id == "MIXED_SCHWARZ_T":
        return _eval_mixed_schwarz(metric, ops, params, fns, rng, samples, accuracy, with_s=False)
    if theorem_id == "PROD_XY":
        return _eval_prod_xy(metric, ops, params, fns, rng, samples, accuracy)
    if theorem_id == "PROD_XY_COR":
        return _eval_prod_xy(metric, ops, params, fns, rng, samples, accuracy)
    if theorem_id == "TRIPLE":
        return _eval_triple(metric, ops, params, fns, rng, samples, accuracy)
    if theorem_id == "POWER_2R":
        return _eval_power_2r(metric, ops, params, fns, rng, samples, accuracy)
    if theorem_id == "POWER_2R_FG":
        return _eval_power_2r_fg(metric, ops, params, fns, rng, samples, accuracy)
    if theorem_id == "OFFDIAG_FG":
        return _eval_offdiag_fg(metric, ops, params, fns, rng, samples, accuracy)
    if theorem_id == "OFFDIAG_SANDWICH":
        return _eval_offdiag_sandwich(metric, ops, params, fns, rng, samples, accuracy)
    if theorem_id == "OFFDIAG_2FG":
        return _eval_offdiag_2fg(metric, ops, params, fns, rng, samples, accuracy)
    if theorem_id == "OFFDIAG_2FG_COR":
        return _eval_offdiag_2fg(metric, ops, params, fns, rng, samples, accuracy)
    if theorem_id == "FULL_NORM":
        return _eval_full_norm(metric, ops, params, fns, rng, samples, accuracy)
    if theorem_id in ("FULL_W_1", "FULL_W_1_COR"):
        return _eval_full_w_1(metric, ops, params, fns, rng, samples, accuracy)
    if theorem_id in ("FULL_W_2", "FULL_W_2_COR"):
        return _eval_full_w_2(metric, ops, params, fns, rng, samples, accuracy)
    if theorem_id == "NXN_S":
        return _eval_nxn(metric, ops, params, fns, rng, samples, accuracy, diag_half=False)
    if theorem_id in ("NXN_R", "NXN_R_COR"):
        return _eval_nxn(metric, ops, params, fns, rng, samples, accuracy, diag_half=True)
    if theorem_id == "EQUIV":
        return _eval_equiv(metric, ops, params, fns, rng, samples, accuracy)
    raise UnknownTheorem(theorem_id)  # pragma: no cover


def _specialize(theorem_id, ops, params, fns):
    """Rewrite a corollary call into its parent's operands and functions."""
    if theorem_id == "PROD_XY_COR":
        return "PROD_XY", ops, [ScalarFnPair.power(params.alpha)]
    if theorem_id == "OFFDIAG_2FG_COR":
        pair = ScalarFnPair.power(params.alpha)
        return "OFFDIAG_2FG", ops, [pair, pair]
    if theorem_id == "NXN_R_COR":
        return "NXN_R", ops, [ScalarFnPair.power(0.5)]
    if theorem_id in ("FULL_W_1_COR", "FULL_W_2_COR"):
        X, Y = ops["X"], ops["Y"]
        return theorem_id.removesuffix("_COR"), {"X": X, "Y": Y, "Z": Y, "W": X}, fns
    return theorem_id, ops, fns


def evaluate(
    theorem_id: str,
    metric: Metric,
    operands: dict[str, np.ndarray],
    params: BoundParams | None = None,
    fns: list[ScalarFnPair] | None = None,
    tol: float = 1e-8,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
    rng: np.random.Generator | None = None,
    accuracy: float = 1e-10,
) -> CheckRecord:
    """Check one registered bound on one concrete instance.

    Hypothesis failures give verdict "skipped"; exponent-constraint
    violations raise BadParams; otherwise the record carries both sides
    and the slack, with verdict set by slack >= -tol * max(1, |rhs|).
    """
    info = THEOREMS.get(theorem_id)
    if info is None:
        raise UnknownTheorem(f"unknown theorem id {theorem_id!r}")
    params = params if params is not None else BoundParams()
    _validate_params(theorem_id, params)
    ops = {name: metric.check_operator(M) for name, M in operands.items()}
    if not info.nxn:
        extra = set(ops) - set(info.operands)
        if extra:
            raise BadParams(f"{theorem_id} does not take operands {sorted(extra)}")
    residuals, members_ok = _collect_residuals(theorem_id, metric, ops)

    eval_id, eval_ops, eval_fns = _specialize(theorem_id, ops, params, fns)
    slots = THEOREMS[eval_id].fn_slots if info.parent else info.fn_slots
    if eval_fns is None:
        eval_fns = [ScalarFnPair.power(0.5)] * slots
    if len(eval_fns) < slots:
        raise BadParams(f"{theorem_id} needs {slots} function pair(s), got {len(eval_fns)}")

    if not members_ok or any(not np.isfinite(v) or v > HYP_TOL for v in residuals.values()):
        record = finish_record(
            theorem_id, residuals, 0.0, 0.0, tol, params=params, seed=seed, kind=info.kind
        )
        if record.verdict != "skipped":
            record = CheckRecord(
                theorem_id=theorem_id,
                hypotheses_ok=False,
                hypothesis_residuals=residuals,
                params=params,
                seed=seed,
                verdict="skipped",
                kind=info.kind,
            )
        return record

    if rng is None:
        rng = default_rng(seed)
    lhs, rhs, lower, kind = _dispatch(
        eval_id, metric, eval_ops, params, eval_fns, rng, max(1, int(samples)), accuracy
    )
    return finish_record(
        theorem_id,
        residuals,
        lhs,
        rhs,
        tol,
        params=params,
        seed=seed,
        kind=kind,
        lower=lower,
    )


def scalar_young(
    a: float,
    b: float,
    params: BoundParams | None = None,
    form: str = "conjugate",
    tol: float = 1e-8,
) -> CheckRecord:
    """The chained scalar mean inequalities behind the operator bounds.

    form "weighted": a^al b^(1-al) <= al a + (1-al) b <= (al a^r + (1-al) b^r)^(1/r);
    form "conjugate": ab <= a^p/p + b^q/q <= (a^(pr)/p + b^(qr)/q)^(1/r).
    """
    params = params if params is not None else BoundParams()
    if not (a >= 0.0 and b >= 0.0 and np.isfinite(a) and np.isfinite(b)):
        raise BadParams(f"a, b must be finite and nonnegative, got {a}, {b}")
    params.require(r=1.0)
    r = params.r
    if form == "weighted":
        al = params.alpha
        v1 = a**al * b ** (1.0 - al)
        v2 = al * a + (1.0 - al) * b
        v3 = (al * a**r + (1.0 - al) * b**r) ** (1.0 / r)
    elif form == "conjugate":
        p, q = params.p, params.q
        v1 = a * b
        v2 = a**p / p + b**q / q
        v3 = (a ** (p * r) / p + b ** (q * r) / q) ** (1.0 / r)
    else:
        raise BadParams(f"form must be 'weighted' or 'conjugate', got {form!r}")
    return finish_record(
        f"YOUNG_{form.upper()}",
        {},
        float(v2),
        float(v3),
        tol,
        params=params,
        kind="two_sided",
        lower=float(v1),
    )
