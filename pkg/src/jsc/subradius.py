"""Lower bounds on the joint spectral subradius from a common invariant cone."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .bounds import DEFAULT_BUDGET, Interval, enumerate_bounds
from .cones import PolyhedralCone, is_invariant
from .errors import DomainError
from .linalg import MatrixSet, operator_norm
from .lp import LPProblem, lp_feasible

BISECTION_MAX_ITER = 60


def _conic_lp(sigma: MatrixSet, k: PolyhedralCone, r: float) -> LPProblem:
    n, m = sigma.n, sigma.m
    if k.is_orthant:
        # x >= 0, sum x = 1, (A - r I) x >= 0
        a_ub = np.vstack([-(a - r * np.eye(n)) for a in sigma])
        return LPProblem(n, a_ub=a_ub, b_ub=np.zeros(n * m),
                         a_eq=np.ones((1, n)), b_eq=[1.0])
    # x = G^T lam, sum lam = 1, (A - r I) x = G^T mu_A with lam, mu_A >= 0
    gt = k.generators.T
    g = gt.shape[1]
    rows = [np.concatenate([np.ones(g), np.zeros(g * m)])[None]]
    for i, a in enumerate(sigma):
        block = np.zeros((n, g * (m + 1)))
        block[:, :g] = -(a - r * np.eye(n)) @ gt
        block[:, g * (i + 1):g * (i + 2)] = gt
        rows.append(block)
    b = np.zeros(1 + n * m)
    b[0] = 1.0
    return LPProblem(g * (m + 1), a_eq=np.vstack(rows), b_eq=b)


def conic_certificate(sigma: MatrixSet, k: PolyhedralCone, r: float,
                      lp_tol: float = 1e-10) -> np.ndarray | None:
    """A vector ``x`` of ``k`` with ``A x - r x`` in ``k`` for all members, or None."""
    res = lp_feasible(_conic_lp(sigma, k, r), lp_tol)
    if not res.feasible:
        return None
    if k.is_orthant:
        return res.witness
    return k.generators.T @ res.witness[:len(k.generators)]


def conic_subradius_lower(sigma: MatrixSet, k: PolyhedralCone, tol: float = 1e-10,
                          lp_tol: float = 1e-10) -> float:
    """Largest ``r`` (to ``tol``) with a common ``x`` in ``k``, ``A x >= r x``.

    Any such ``r`` bounds the subradius from below.  Bisection runs on
    ``[0, min ||A||_2]`` since the subradius never exceeds the smallest norm.
    """
    if k.dim != sigma.n:
        raise DomainError("cone dimension does not match the matrices")
    if not all(is_invariant(a, k) for a in sigma):
        raise DomainError("every matrix must leave the cone invariant")
    hi = min(operator_norm(a) for a in sigma)
    if hi == 0.0:
        return 0.0
    if conic_certificate(sigma, k, hi, lp_tol) is not None:
        return hi
    lo = 0.0
    width = tol * max(1.0, hi)
    for _ in range(BISECTION_MAX_ITER):
        if hi - lo <= width:
            break
        mid = 0.5 * (lo + hi)
        if conic_certificate(sigma, k, mid, lp_tol) is not None:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass
class SubradiusReport:
    interval: Interval
    conic_lower: float | None
    upper: float
    upper_t: int
    t_max: int
    cone: str | None
    provenance: dict = field(default_factory=dict)


def subradius_bounds(sigma: MatrixSet, t_max: int, k: PolyhedralCone | None = None,
                     tol: float = 1e-10, budget: int = DEFAULT_BUDGET) -> SubradiusReport:
    """Interval ``[conic lower bound, min_t min_A rho(A)^(1/t)]``.

    Without a cone the lower end is 0; a cone that some member does not
    leave invariant also gives 0, with a warning.
    """
    lower = None
    if k is not None:
        if k.dim == sigma.n and all(is_invariant(a, k) for a in sigma):
            lower = conic_subradius_lower(sigma, k, tol)
        else:
            warnings.warn("cone is not invariant for every member; subradius lower bound is 0",
                          stacklevel=2)
    rep = enumerate_bounds(sigma, t_max, budget=budget,
                           subradius_lower=lower or 0.0, tol=max(tol, 1e-9))
    seq = rep.upper_sub_rho
    i = int(np.argmin(seq))
    prov = {
        "lower": "conic LP bisection" if lower is not None else "trivial lower bound 0",
        "cone_used": lower is not None,
        "upper": rep.provenance["upper_sub_rho"][i],
    }
    return SubradiusReport(rep.best_interval_sub, lower, seq[i], rep.t_values[i],
                           t_max, repr(k) if k is not None else None, prov)
