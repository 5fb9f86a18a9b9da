"""Bounded-variable primal simplex with dual extraction.

Two arithmetic backends share one implementation: float64 numpy tableaus
for speed, and ``object`` arrays of :class:`fractions.Fraction` for exact
results.  ``lp_solve(..., exact=True)`` first solves in floats, rounds the
primal and dual vectors to nearby rationals and checks the pair exactly
(primal feasibility, dual feasibility, equal objectives).  Only when that
certificate fails does it rerun the simplex in rational arithmetic.

Prices follow the ``<=``-row convention used for FORI's dual: for a row
``a·x <= b`` the reported dual ``p`` is nonnegative and enters the dual
objective as ``-b·p``; reduced costs are ``c + A^T p``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
from scipy.linalg.blas import dger as _dger

from .model import IlpModel

__all__ = [
    "LpStatus",
    "LpSolution",
    "NumericalFailure",
    "lp_solve",
    "simplex",
    "dual_objective",
    "check_dual_certificate",
]

FLOAT_TOL = 1e-9


class NumericalFailure(RuntimeError):
    pass


class LpStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    NUMERICAL_FAILURE = "numerical_failure"


@dataclass
class LpSolution:
    status: LpStatus
    objective: object = None
    primal: np.ndarray | None = None
    duals: np.ndarray | None = None
    reduced: np.ndarray | None = None
    dual_objective: object = None
    iterations: int = 0
    exact: bool = False
    farkas_row: int | None = None
    basis: tuple = ()
    info: dict = field(default_factory=dict)

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


@dataclass
class _Result:
    status: LpStatus
    x: np.ndarray | None = None
    y: np.ndarray | None = None
    iterations: int = 0
    farkas_row: int | None = None
    basis: tuple = ()
    bland: bool = False


def simplex(A, b, is_eq, c, lb, ub, *, exact=False, stall_limit=None, max_iter=None) -> _Result:
    """Minimize ``c·x`` s.t. ``A x (<= | =) b``, ``lb <= x <= ub``.

    ``lb`` must be finite; ``ub`` may hold ``inf`` (float) or ``None``
    (exact).  Returns structural values ``x`` and row multipliers ``y``
    with ``c - A^T y`` the reduced costs (``y <= 0`` on ``<=`` rows).
    """
    dtype = object if exact else float
    tol = 0 if exact else FLOAT_TOL
    A = np.array(A, dtype=dtype)
    m, n = A.shape
    b = np.array(b, dtype=dtype).reshape(m)
    c = np.array(c, dtype=dtype).reshape(n)
    if exact:
        A = _to_frac(A)
        b, c = _to_frac(b), _to_frac(c)
        lb = _to_frac(np.array(lb, dtype=object))
        ub = np.array([None if u is None or (isinstance(u, float) and math.isinf(u)) else Fraction(u)
                       for u in ub], dtype=object)
    else:
        lb = np.array(lb, dtype=float)
        ub = np.array([math.inf if u is None else u for u in ub], dtype=float)
    is_eq = np.asarray(is_eq, dtype=bool)
    if stall_limit is None:
        stall_limit = 10 * max(m, 1)
    if max_iter is None:
        max_iter = 50 * (m + n) + 1000

    resid = b - A.dot(lb) if n else b.copy()
    sign = np.ones(m, dtype=dtype)
    need_art = np.zeros(m, dtype=bool)
    for i in range(m):
        if is_eq[i] or resid[i] < 0:
            need_art[i] = True
            if resid[i] < 0:
                sign[i] = -1
    slack_rows = np.flatnonzero(~is_eq)
    art_rows = np.flatnonzero(need_art)
    ns, na = len(slack_rows), len(art_rows)
    N = n + ns + na
    T = np.zeros((m, N), dtype=dtype)
    T[:, :n] = A * sign[:, None]
    for t, i in enumerate(slack_rows):
        T[i, n + t] = sign[i]
    for t, i in enumerate(art_rows):
        T[i, n + ns + t] = 1
    if exact:
        T = _to_frac(T)
    else:
        T = np.asfortranarray(T)
    zero = Fraction(0) if exact else 0.0
    inf = None if exact else math.inf
    lo = np.empty(N, dtype=dtype)
    hi = np.empty(N, dtype=dtype)
    lo[:n], hi[:n] = lb, ub
    lo[n:] = zero
    hi[n:] = inf
    x = np.empty(N, dtype=dtype)
    x[:n] = lb
    x[n:] = zero
    basis = np.empty(m, dtype=int)
    slack_of = {i: n + t for t, i in enumerate(slack_rows)}
    art_of = {i: n + ns + t for t, i in enumerate(art_rows)}
    init_cols = np.empty(m, dtype=int)
    for i in range(m):
        col = art_of[i] if need_art[i] else slack_of[i]
        basis[i] = col
        init_cols[i] = col
        x[col] = abs(resid[i]) if need_art[i] else resid[i]
    is_basic = np.zeros(N, dtype=bool)
    is_basic[basis] = True
    at_upper = np.zeros(N, dtype=bool)

    state = dict(iterations=0, bland=False)

    def has_ub(j):
        return hi[j] is not None and not (not exact and math.isinf(hi[j]))

    def run(cost) -> LpStatus:
        d = cost - cost[basis].dot(T) if m else cost.copy()
        degenerate = 0
        bland = False
        while True:
            if state["iterations"] >= max_iter:
                return LpStatus.NUMERICAL_FAILURE
            width = np.array([(hi[j] is None) or (hi[j] - lo[j] > tol) for j in range(N)]) if exact \
                else (hi - lo > tol)
            cand_up = (~is_basic) & (~at_upper) & (d < -tol) & width
            cand_dn = (~is_basic) & at_upper & (d > tol)
            cand = np.flatnonzero(cand_up | cand_dn)
            if cand.size == 0:
                return LpStatus.OPTIMAL
            if bland:
                j = int(cand[0])
            else:
                j = int(cand[np.argmax(np.abs(d[cand]).astype(float))])
            up = bool(cand_up[j])
            col = T[:, j] if up else -T[:, j]
            if exact:
                theta, r = _ratio_exact(col, basis, x, lo, hi, j, has_ub, bland)
            else:
                theta, r = _ratio_float(col, basis, x, lo, hi, j, bland)
            if theta is None:
                return LpStatus.UNBOUNDED
            state["iterations"] += 1
            if theta <= tol:
                degenerate += 1
                if degenerate > stall_limit:
                    bland = True
                    state["bland"] = True
            else:
                degenerate = 0
            if theta:
                x[basis] = x[basis] - theta * col
            if r < 0:
                # bound flip of the entering variable
                at_upper[j] = up
                x[j] = hi[j] if up else lo[j]
                continue
            leaving = basis[r]
            if col[r] > 0:
                x[leaving] = lo[leaving]
                at_upper[leaving] = False
            else:
                x[leaving] = hi[leaving]
                at_upper[leaving] = True
            x[j] = (lo[j] + theta) if up else (hi[j] - theta)
            at_upper[j] = False
            piv = T[r, j]
            T[r] = T[r] / piv
            pc = T[:, j].copy()
            pc[r] = zero
            if exact:
                nz = np.flatnonzero(pc != 0)
                if nz.size:
                    T[nz] -= np.outer(pc[nz], T[r])
            else:
                # in-place rank-1 update, T is Fortran-ordered
                _dger(-1.0, pc, T[r].copy(), a=T, overwrite_a=True)
            d = d - d[j] * T[r]
            is_basic[leaving] = False
            is_basic[j] = True
            basis[r] = j

    if na:
        cost1 = np.zeros(N, dtype=dtype)
        cost1[n + ns:] = 1
        if exact:
            cost1 = _to_frac(cost1)
        st = run(cost1)
        if st is not LpStatus.OPTIMAL:
            return _Result(LpStatus.NUMERICAL_FAILURE, iterations=state["iterations"])
        infeas = sum(x[n + ns:])
        if infeas > (0 if exact else 1e-7):
            arts = [(x[n + ns + t], i) for t, i in enumerate(art_rows)]
            worst = max(arts, key=lambda p: p[0])[1]
            return _Result(LpStatus.INFEASIBLE, iterations=state["iterations"], farkas_row=int(worst))
        # artificials stay at zero from here on
        hi[n + ns:] = zero
        for j in range(n + ns, N):
            if not is_basic[j]:
                x[j] = zero
                at_upper[j] = False

    cost2 = np.zeros(N, dtype=dtype)
    cost2[:n] = c
    if exact:
        cost2 = _to_frac(cost2)
    st = run(cost2)
    if st is not LpStatus.OPTIMAL:
        return _Result(st, iterations=state["iterations"])

    y = (cost2[basis].dot(T[:, init_cols]) if m else np.zeros(0, dtype=dtype)) * sign
    xs = x[:n].copy()
    if not exact:
        # slack columns are +e_i and artificial columns sign_i*e_i in row orientation
        col_rows = {n + t: (int(i), 1.0) for t, i in enumerate(slack_rows)}
        col_rows.update({n + ns + t: (int(i), float(sign[i])) for t, i in enumerate(art_rows)})
        xs, y = _refine(A, b, c, xs, y, basis, n, col_rows, sign)
    return _Result(LpStatus.OPTIMAL, xs, y, state["iterations"], basis=tuple(int(v) for v in basis),
                   bland=state["bland"])


def _ratio_float(col, basis, x, lo, hi, j, bland):
    """Vectorized ratio test; ``r = -1`` means the entering variable flips."""
    theta = hi[j] - lo[j]
    theta = None if math.isinf(theta) else theta
    xb, lob, hib = x[basis], lo[basis], hi[basis]
    pos = col > FLOAT_TOL
    neg = (col < -FLOAT_TOL) & np.isfinite(hib)
    if not (pos.any() or neg.any()):
        return theta, -1
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(pos, (xb - lob) / col, np.where(neg, (hib - xb) / -col, np.inf))
    t = np.maximum(t, 0.0)
    tmin = float(t.min())
    if theta is not None and tmin >= theta - FLOAT_TOL:
        return theta, -1
    ties = np.flatnonzero(t <= tmin + FLOAT_TOL)
    if bland:
        r = int(ties[np.argmin(basis[ties])])
    else:
        r = int(ties[np.argmax(np.abs(col[ties]))])
    return tmin, r


def _ratio_exact(col, basis, x, lo, hi, j, has_ub, bland):
    theta = (hi[j] - lo[j]) if has_ub(j) else None
    r = -1
    best_piv = 0
    for i in np.flatnonzero(col != 0):
        bv = basis[i]
        if col[i] > 0:
            t = (x[bv] - lo[bv]) / col[i]
        elif has_ub(bv):
            t = (hi[bv] - x[bv]) / (-col[i])
        else:
            continue
        if t < 0:
            t = Fraction(0)
        if theta is None or t < theta:
            theta, r, best_piv = t, i, abs(col[i])
        elif t == theta and r >= 0:
            if bland:
                if bv < basis[r]:
                    r, best_piv = i, abs(col[i])
            elif abs(col[i]) > best_piv:
                r, best_piv = i, abs(col[i])
    return theta, r


def _refine(A, b, c, xs, y, basis, n, col_rows, sign):
    """Recompute basic values and duals from the final basis by direct solves."""
    m = A.shape[0]
    if m == 0:
        return xs, y
    B = np.zeros((m, m))
    cb = np.zeros(m)
    for p, j in enumerate(basis):
        if j < n:
            B[:, p] = A[:, j]
            cb[p] = c[j]
        else:
            i, coeff = col_rows[j]
            B[i, p] = coeff
    nonbasic = np.ones(n, dtype=bool)
    nonbasic[[j for j in basis if j < n]] = False
    rhs = b - A[:, nonbasic].dot(xs[nonbasic])
    try:
        vals = np.linalg.solve(B, rhs)
        yy = np.linalg.solve(B.T, cb)
    except np.linalg.LinAlgError:
        return xs, y
    out = xs.copy()
    for p, j in enumerate(basis):
        if j < n:
            out[j] = vals[p]
    if np.max(np.abs(out - xs), initial=0.0) > 1e-6 or np.max(np.abs(yy - y), initial=0.0) > 1e-6:
        return xs, y
    return out, yy


def _to_frac(arr):
    out = np.empty(arr.shape, dtype=object)
    flat_in = arr.reshape(-1)
    flat = out.reshape(-1)
    for i, v in enumerate(flat_in):
        flat[i] = v if isinstance(v, Fraction) else Fraction(v)
    return out


def _bounds(model: IlpModel, fixings: Mapping[int, int] | None):
    lb = [0] * model.n_vars
    ub: list = [None] * model.n_vars
    for j, v in (fixings or {}).items():
        if v == 1:
            lb[j] = 1
        elif v == 0:
            ub[j] = 0
        else:
            raise ValueError(f"fixing for variable {j} must be 0 or 1, got {v!r}")
    return lb, ub


def dual_objective(model: IlpModel, prices, lb=None, ub=None):
    """Lagrangian dual value of ``prices`` (any sign-feasible vector).

    Returns ``(value, reduced_costs)``.  ``value`` is ``-inf``/``None`` when
    a variable without upper bound has negative reduced cost.
    """
    exact = all(isinstance(p, (int, Fraction, np.integer)) for p in prices)
    n = model.n_vars
    d = [Fraction(v) if exact else float(v) for v in model.objective]
    for row, p in zip(model.rows, prices):
        if not p:
            continue
        for j, cf in zip(row.idx, row.coef):
            d[j] += cf * p
    lb = lb or [0] * n
    ub = ub or [None] * n
    val = Fraction(model.constant) if exact else float(model.constant)
    for row, p in zip(model.rows, prices):
        val -= row.rhs * p
    for j in range(n):
        if d[j] > 0:
            val += lb[j] * d[j]
        elif d[j] < 0:
            if ub[j] is None:
                tol = 0 if exact else FLOAT_TOL
                if d[j] < -tol:
                    return None, d
            else:
                val += ub[j] * d[j]
    return val, d


def lp_solve(
    m: IlpModel,
    fixings: Mapping[int, int] | None = None,
    *,
    exact: bool = False,
    stall_limit: int | None = None,
    max_iter: int | None = None,
) -> LpSolution:
    """Solve the LP relaxation of ``m``.

    ``fixings`` maps variable indices to 0 or 1.  The objective includes the
    model constant and is expressed in ticks.  In exact mode objective,
    primal and duals are :class:`Fraction` values and the optimum is proven
    by an exactly checked primal/dual pair.
    """
    lb, ub = _bounds(m, fixings)
    A, b, is_eq, c = m.dense(float)
    res = simplex(A, b, is_eq, c, lb, [math.inf if u is None else u for u in ub],
                  stall_limit=stall_limit, max_iter=max_iter)
    if res.status is LpStatus.NUMERICAL_FAILURE:
        raise NumericalFailure(f"simplex made no progress after {res.iterations} pivots")
    if res.status is not LpStatus.OPTIMAL:
        if exact and res.status is LpStatus.INFEASIBLE:
            return _exact_resolve(m, lb, ub, stall_limit, max_iter)
        return LpSolution(res.status, iterations=res.iterations, farkas_row=res.farkas_row)
    prices = -res.y
    if not exact:
        x = np.clip(res.x, 0.0, None)
        obj = float(np.dot(c, x)) + m.constant
        dobj, d = dual_objective(m, np.maximum(prices, 0.0) * ~is_eq + prices * is_eq, lb, ub)
        return LpSolution(LpStatus.OPTIMAL, obj, x, prices, np.array(d), dobj, res.iterations,
                          basis=res.basis, info={"bland": res.bland})

    sol = _certify(m, res, lb, ub)
    if sol is None:
        return _exact_resolve(m, lb, ub, stall_limit, max_iter)
    sol.iterations = res.iterations
    sol.basis = res.basis
    return sol


def _rational(v: float, max_den: int = 10**6) -> Fraction:
    return Fraction(float(v)).limit_denominator(max_den)


def _certify(m: IlpModel, res: _Result, lb, ub) -> LpSolution | None:
    x = [_rational(v) for v in res.x]
    prices = []
    for row, yv in zip(m.rows, res.y):
        p = _rational(-yv)
        if row.sense == "<=" and p < 0:
            p = Fraction(0)
        prices.append(p)
    for j in range(m.n_vars):
        if x[j] < lb[j] or (ub[j] is not None and x[j] > ub[j]):
            return None
    if not all(r.satisfied(x) for r in m.rows):
        return None
    primal = m.value(x)
    dual, d = dual_objective(m, prices, lb, ub)
    if dual is None or dual != primal:
        return None
    return LpSolution(LpStatus.OPTIMAL, primal, np.array(x, dtype=object), np.array(prices, dtype=object),
                      np.array(d, dtype=object), dual, exact=True, info={"certified": "rounded"})


def _exact_resolve(m, lb, ub, stall_limit, max_iter) -> LpSolution:
    A, b, is_eq, c = m.dense(object)
    res = simplex(A, b, is_eq, c, lb, ub, exact=True, stall_limit=stall_limit, max_iter=max_iter)
    if res.status is LpStatus.NUMERICAL_FAILURE:
        raise NumericalFailure(f"exact simplex made no progress after {res.iterations} pivots")
    if res.status is not LpStatus.OPTIMAL:
        return LpSolution(res.status, iterations=res.iterations, exact=True, farkas_row=res.farkas_row)
    x = list(res.x)
    prices = [-v for v in res.y]
    primal = m.value(x)
    dual, d = dual_objective(m, prices, lb, ub)
    return LpSolution(LpStatus.OPTIMAL, primal, np.array(x, dtype=object), np.array(prices, dtype=object),
                      np.array(d, dtype=object), dual, res.iterations, exact=True, basis=res.basis,
                      info={"certified": "exact-simplex"})


def check_dual_certificate(m: IlpModel, primal: Sequence | None, dual: Sequence, tol=0) -> bool:
    """True iff ``dual`` (one nonnegative price per ``<=`` row) is feasible
    for the dual LP of ``m`` (variables ``>= 0``, no upper bounds) and its
    objective equals that of ``primal``.  When ``primal`` is ``None`` only
    dual feasibility is checked.

    For FORI the prices are ordered like the rows: ``u`` (G assignment),
    ``v`` (H assignment), ``r`` (tail rows), ``s`` (head rows), ``t``
    (node/arc rows).
    """
    if len(dual) != m.n_rows:
        from .assignment import DimensionMismatch

        raise DimensionMismatch(f"dual has {len(dual)} entries, model has {m.n_rows} rows")
    for row, p in zip(m.rows, dual):
        if row.sense == "<=" and p < -tol:
            return False
    value, d = dual_objective(m, list(dual))
    if value is None or any(v < -tol for v in d):
        return False
    if primal is None:
        return True
    if not m.is_feasible(primal, tol):
        return False
    return abs(m.value(primal) - value) <= tol
