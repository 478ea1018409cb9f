"""Kronecker-lift bounds on the joint spectral radius."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg as spla

from .bounds import DEFAULT_BUDGET, ProductTree
from .cones import PolyhedralCone, is_invariant
from .errors import DomainError, SizeError
from .linalg import DEFAULT_DIM_CAP, MatrixSet, kron, spectral_radius

DENSE_EIG_LIMIT = 1024


class UncertifiedWarning(UserWarning):
    """A bound was computed without a verified invariant cone."""


@dataclass
class KronReport:
    """``upper_k = rho(sum A^(x)k)^(1/k)`` and ``lower_k = (rho(...)/m)^(1/k)``.

    For a cone-invariant set the joint spectral radius lies in
    ``[lower_k, upper_k]`` for every ``k``.
    """

    m: int
    n: int
    k_values: list[int]
    rho_sum: list[float]
    upper_k: list[float]
    lower_k: list[float]
    certified: bool


def _rho_large(s: np.ndarray) -> float:
    if s.shape[0] <= DENSE_EIG_LIMIT:
        return spectral_radius(s)
    try:
        vals = spla.eigs(s, k=4, which="LM", return_eigenvectors=False, tol=1e-12)
        return float(np.max(np.abs(vals)))
    except spla.ArpackNoConvergence:
        return spectral_radius(s)


def check_cone(sigma: MatrixSet, cone: PolyhedralCone | None, what: str) -> bool:
    if cone is None:
        warnings.warn(f"{what}: no invariant cone supplied, bounds are not certified",
                      UncertifiedWarning, stacklevel=3)
        return False
    if cone.dim != sigma.n:
        raise DomainError("cone dimension does not match the matrices")
    if not all(is_invariant(a, cone) for a in sigma):
        warnings.warn(f"{what}: the supplied cone is not invariant, bounds are not certified",
                      UncertifiedWarning, stacklevel=3)
        return False
    return True


def lifted_sum(sigma: MatrixSet, k: int, dim_cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """``sum_i A_i^(x)k``."""
    if sigma.n ** k > dim_cap:
        raise SizeError(f"lift dimension {sigma.n}^{k} exceeds the cap {dim_cap}")
    total = None
    for a in sigma:
        p = np.array(a)
        for _ in range(k - 1):
            p = kron(a, p, dim_cap)
        total = p if total is None else total + p
    return total


def kron_lift_bounds(sigma: MatrixSet, k_max: int, cone: PolyhedralCone | None = None,
                     dim_cap: int = DEFAULT_DIM_CAP) -> KronReport:
    if k_max < 1:
        raise DomainError("k_max must be at least 1")
    if sigma.n ** k_max > dim_cap:
        raise SizeError(f"lift dimension {sigma.n}^{k_max} exceeds the cap {dim_cap}")
    certified = check_cone(sigma, cone, "Kronecker lift")
    m = sigma.m
    powers = [np.array(a) for a in sigma]
    rho_sum, upper, lower = [], [], []
    for k in range(1, k_max + 1):
        if k > 1:
            powers = [np.kron(a, p) for a, p in zip(sigma, powers)]
        rho = _rho_large(sum(powers))
        rho_sum.append(rho)
        upper.append(rho ** (1.0 / k))
        lower.append((rho / m) ** (1.0 / k))
    return KronReport(m, sigma.n, list(range(1, k_max + 1)), rho_sum, upper, lower, certified)


@dataclass
class TraceKronCheck:
    """Both sides of ``trace((sum A^(x)k / m)^t)^(1/(tk)) <= max trace(A)^(1/t)``.

    ``holds`` is None when some product of length ``t`` has negative trace:
    the inequality is only claimed for nonnegative traces.
    ``identity_residual`` is the relative gap in
    ``trace((sum A^(x)k)^t) == sum over products of trace(A)^k``.
    """

    k: int
    t: int
    lhs: float | None
    rhs: float | None
    holds: bool | None
    identity_residual: float
    reason: str = ""


def trace_kron_inequality(sigma: MatrixSet, k: int, t: int, tol: float = 1e-9,
                          dim_cap: int = DEFAULT_DIM_CAP,
                          budget: int = DEFAULT_BUDGET) -> TraceKronCheck:
    if k < 1 or t < 1:
        raise DomainError("k and t must be positive")
    m = sigma.m
    s = lifted_sum(sigma, k, dim_cap)
    lifted_trace = float(np.trace(np.linalg.matrix_power(s, t)))
    tree = ProductTree(sigma, budget)
    for _, mant, expo, _ in tree.levels(t):
        pass
    traces = np.trace(mant, axis1=1, axis2=2) * np.exp2(expo.astype(float))
    direct = float(np.sum(traces ** k))
    scale = max(abs(lifted_trace), float(np.sum(np.abs(traces) ** k)), 1e-300)
    residual = abs(lifted_trace - direct) / scale
    floor = tol * float(np.max(np.abs(traces)))
    if np.any(traces < -floor):
        return TraceKronCheck(k, t, None, None, None, residual,
                              "undefined: a product of this length has negative trace")
    lhs = max(lifted_trace / m ** t, 0.0) ** (1.0 / (t * k))
    rhs = max(float(np.max(traces)), 0.0) ** (1.0 / t)
    holds = lhs <= rhs + tol * max(1.0, rhs)
    return TraceKronCheck(k, t, lhs, rhs, bool(holds), residual)
