"""Small dense linear programs: two-phase tableau simplex with Bland's rule.

Problems here are tiny (a few dozen variables), so a plain tableau is both
fast enough and easy to audit.  Bland's rule makes the pivot sequence
deterministic and cycle-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError, ValidationError

PIVOT_EPS = 1e-11


@dataclass
class LPProblem:
    """Constraints ``a_ub @ x <= b_ub``, ``a_eq @ x == b_eq``.

    Variables are nonnegative unless listed in ``free``.  ``objective`` (to be
    minimised) is optional and only used by :func:`lp_minimize`.
    """

    n_vars: int
    a_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    free: tuple[int, ...] = ()
    objective: np.ndarray | None = None

    def __post_init__(self):
        if self.n_vars < 1:
            raise ValidationError("LP needs at least one variable")
        self.a_ub, self.b_ub = self._pair(self.a_ub, self.b_ub, "ub")
        self.a_eq, self.b_eq = self._pair(self.a_eq, self.b_eq, "eq")
        self.free = tuple(sorted(set(int(j) for j in self.free)))
        if any(not 0 <= j < self.n_vars for j in self.free):
            raise ValidationError("free-variable index out of range")
        if self.objective is not None:
            self.objective = np.asarray(self.objective, dtype=float).ravel()
            if self.objective.shape != (self.n_vars,):
                raise ValidationError("objective length must equal n_vars")

    def _pair(self, a, b, name):
        if a is None:
            return np.zeros((0, self.n_vars)), np.zeros(0)
        a = np.atleast_2d(np.asarray(a, dtype=float))
        b = np.asarray(b, dtype=float).ravel()
        if a.shape[1] != self.n_vars or a.shape[0] != b.shape[0]:
            raise ValidationError(
                f"inconsistent {name} constraint shapes {a.shape} / {b.shape}")
        return a, b

    def residual(self, x) -> float:
        """Largest constraint violation of ``x`` (0 when feasible)."""
        x = np.asarray(x, dtype=float)
        viol = [0.0]
        if self.a_ub.shape[0]:
            viol.append(float(np.max(self.a_ub @ x - self.b_ub)))
        if self.a_eq.shape[0]:
            viol.append(float(np.max(np.abs(self.a_eq @ x - self.b_eq))))
        bounded = [j for j in range(self.n_vars) if j not in self.free]
        if bounded:
            viol.append(float(np.max(-x[bounded])))
        return max(viol)


@dataclass
class LPResult:
    status: str  # feasible | infeasible | optimal | unbounded
    witness: np.ndarray | None
    phase_one_value: float
    iterations: int
    objective_value: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.status in ("feasible", "optimal", "unbounded")


class _Tableau:
    def __init__(self, p: LPProblem):
        self.p = p
        # column layout: nonneg vars | free+ | free- | slacks | artificials
        self.cols = []
        for j in range(p.n_vars):
            self.cols.append((j, 1.0))
        for j in p.free:
            self.cols.append((j, -1.0))
        n_struct = len(self.cols)
        a = np.vstack([p.a_ub, p.a_eq])
        b = np.concatenate([p.b_ub, p.b_eq])
        rows = a.shape[0]
        struct = np.hstack([a, -a[:, list(p.free)]]) if p.free else a
        slack = np.vstack([np.eye(p.a_ub.shape[0]),
                           np.zeros((p.a_eq.shape[0], p.a_ub.shape[0]))])
        body = np.hstack([struct, slack])
        sign = np.where(b < 0, -1.0, 1.0)
        body *= sign[:, None]
        b = b * sign
        self.n_real = body.shape[1]
        self.n_struct = n_struct
        self.T = np.hstack([body, np.eye(rows), b[:, None]])
        self.basis = list(range(self.n_real, self.n_real + rows))
        self.rows = rows
        self.iterations = 0
        self.max_iter = 50 * (rows + self.n_real) + 100

    def pivot(self, r, c):
        T = self.T
        T[r] /= T[r, c]
        col = T[:, c].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        self.basis[r] = c
        self.iterations += 1

    def run(self, cost, allowed):
        """Minimise ``cost`` over the current basis with Bland's rule."""
        T = self.T
        while True:
            if self.iterations > self.max_iter:
                raise NumericalError(
                    "simplex iteration cap exceeded",
                    {"iterations": self.iterations, "rows": self.rows})
            cb = cost[self.basis]
            reduced = cost[:-1] - cb @ T[:, :-1]
            entering = next((j for j in allowed if reduced[j] < -1e-12), None)
            if entering is None:
                return "optimal"
            colv = T[:, entering]
            best, leave = None, None
            for i in range(self.rows):
                if colv[i] > PIVOT_EPS:
                    ratio = T[i, -1] / colv[i]
                    if best is None or ratio < best - 1e-15 or (
                            abs(ratio - best) <= 1e-15 and self.basis[i] < self.basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return "unbounded"
            self.pivot(leave, entering)

    def point(self):
        z = np.zeros(self.T.shape[1] - 1)
        for i, j in enumerate(self.basis):
            z[j] = self.T[i, -1]
        x = np.zeros(self.p.n_vars)
        for c, (j, s) in enumerate(self.cols):
            x[j] += s * max(z[c], 0.0)
        return x


def _phase_one(p: LPProblem, tol: float):
    tab = _Tableau(p)
    total = tab.T.shape[1]
    cost = np.zeros(total)
    cost[tab.n_real:total - 1] = 1.0
    tab.run(cost, range(total - 1))
    value = float(sum(tab.T[i, -1] for i, j in enumerate(tab.basis) if j >= tab.n_real))
    return tab, max(value, 0.0)


def lp_feasible(p: LPProblem, tol: float = 1e-9) -> LPResult:
    """Phase-one simplex.

    Feasible when the minimal total artificial mass is at most ``tol``; every
    row residual of the witness is then bounded by that mass.
    """
    tab, value = _phase_one(p, tol)
    if value > tol:
        return LPResult("infeasible", None, value, tab.iterations)
    return LPResult("feasible", tab.point(), value, tab.iterations)


def lp_minimize(p: LPProblem, tol: float = 1e-9) -> LPResult:
    """Minimise ``p.objective``; phase two starts from the phase-one basis."""
    if p.objective is None:
        raise ValidationError("lp_minimize needs an objective")
    tab, value = _phase_one(p, tol)
    if value > tol:
        return LPResult("infeasible", None, value, tab.iterations)
    # drive zero-level artificials out of the basis where possible
    for i, j in enumerate(tab.basis):
        if j >= tab.n_real:
            row = tab.T[i, :tab.n_real]
            k = next((c for c in range(tab.n_real) if abs(row[c]) > 1e-9), None)
            if k is not None:
                tab.pivot(i, k)
    total = tab.T.shape[1]
    cost = np.zeros(total)
    for c, (j, s) in enumerate(tab.cols):
        cost[c] = s * p.objective[j]
    status = tab.run(cost, range(tab.n_real))
    x = tab.point()
    obj = float(p.objective @ x) if status == "optimal" else -np.inf
    return LPResult(status, x, value, tab.iterations, obj)
