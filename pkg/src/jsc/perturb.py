"""Hausdorff distance between matrix sets and seeded perturbation studies."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bounds import DEFAULT_BUDGET, Interval, enumerate_bounds
from .cones import PolyhedralCone, is_invariant
from .errors import DomainError, ValidationError
from .linalg import MatrixSet, operator_norms
from .subradius import conic_subradius_lower, subradius_bounds

DISTANCE_NORMS = ("two", "one", "inf", "max")


def _norms(diff: np.ndarray, norm_kind: str) -> np.ndarray:
    if norm_kind == "max":
        return np.abs(diff).reshape(diff.shape[0], -1).max(axis=1)
    return operator_norms(diff, norm_kind)


def hausdorff_distance(a: MatrixSet, b: MatrixSet, norm_kind: str = "two") -> float:
    """Larger of the two directed sup-inf distances between the member sets.

    ``norm_kind`` is an induced norm or ``max`` (largest entry modulus).
    """
    if a.n != b.n:
        raise ValidationError("matrix sets must share a dimension")
    if norm_kind not in DISTANCE_NORMS:
        raise ValidationError(f"unknown norm kind {norm_kind!r}")
    sa, sb = a.stack, b.stack
    diff = (sa[:, None] - sb[None]).reshape(-1, a.n, a.n)
    d = _norms(diff, norm_kind).reshape(a.m, b.m)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


@dataclass
class PerturbationRow:
    delta: float
    hausdorff_max: float
    jsr_mid_dev: float
    jsr_end_dev: float
    sub_mid_dev: float
    sub_end_dev: float


@dataclass
class PerturbationReport:
    """Worst-case interval deviations per perturbation radius.

    ``hausdorff_max`` is the largest realised distance (max-entry norm) over
    the trials; the ``*_mid_dev`` columns compare interval midpoints and the
    ``*_end_dev`` columns the larger endpoint shift.
    """

    deltas: list[float]
    trials: int
    seed: int
    t_max: int
    positive_mode: bool
    cone: str | None
    base_jsr: Interval
    base_sub: Interval
    rows: list[PerturbationRow]
    provenance: dict = field(default_factory=dict)


def _intervals(sigma, t_max, cone, budget):
    lower = None
    if cone is not None and all(is_invariant(a, cone) for a in sigma):
        lower = conic_subradius_lower(sigma, cone)
    rep = enumerate_bounds(sigma, t_max, budget=budget, subradius_lower=lower or 0.0)
    return rep.best_interval_jsr, rep.best_interval_sub


def _dev(a: Interval, b: Interval):
    return abs(a.midpoint - b.midpoint), max(abs(a.lower - b.lower), abs(a.upper - b.upper))


def perturbation_study(sigma: MatrixSet, deltas, trials: int = 20, seed: int = 0,
                       t_max: int = 8, cone: PolyhedralCone | None = None,
                       positive_mode: bool | None = None,
                       budget: int = DEFAULT_BUDGET) -> PerturbationReport:
    """Perturb every entry uniformly in ``[-delta, delta]`` and re-bound.

    Trials for the ``i``-th radius draw from ``SeedSequence(seed, spawn_key=(i,))``.
    In positive mode (default when every entry is positive) ``delta`` must
    stay below the smallest entry so perturbed sets remain positive; the
    orthant is then used for the conic subradius bound unless a cone is given.
    """
    deltas = [float(d) for d in deltas]
    if any(d < 0 for d in deltas):
        raise DomainError("perturbation radii must be nonnegative")
    if any(b > a for a, b in zip(deltas, deltas[1:])):
        raise DomainError("perturbation radii must be nonincreasing")
    if trials < 1:
        raise DomainError("trials must be positive")
    if positive_mode is None:
        positive_mode = sigma.is_positive()
    base = sigma.stack
    if positive_mode:
        min_entry = float(base.min())
        if min_entry <= 0:
            raise DomainError("positive mode needs strictly positive matrices")
        bad = [d for d in deltas if d >= min_entry]
        if bad:
            raise DomainError(f"delta {bad[0]} is not below the smallest entry {min_entry}")
        if cone is None:
            cone = PolyhedralCone.orthant(sigma.n)
    base_jsr, base_sub = _intervals(sigma, t_max, cone, budget)
    rows = []
    for i, delta in enumerate(deltas):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
        worst = [0.0] * 5
        for _ in range(trials):
            noise = rng.uniform(-delta, delta, size=base.shape)
            pert = base + noise
            if positive_mode:
                pert = np.maximum(pert, np.finfo(float).tiny)
            sp = MatrixSet(list(pert))
            jsr, sub = _intervals(sp, t_max, cone, budget)
            vals = (hausdorff_distance(sigma, sp, "max"), *_dev(jsr, base_jsr), *_dev(sub, base_sub))
            worst = [max(w, v) for w, v in zip(worst, vals)]
        rows.append(PerturbationRow(delta, *worst))
    prov = {"distribution": "entrywise uniform on [-delta, delta]",
            "seeding": "SeedSequence(seed, spawn_key=(delta_index,))",
            "subradius_lower": "conic LP bisection" if cone is not None else "trivial 0"}
    return PerturbationReport(deltas, trials, seed, t_max, bool(positive_mode),
                              repr(cone) if cone is not None else None,
                              base_jsr, base_sub, rows, prov)


def discontinuity_family(k: int) -> MatrixSet:
    """``{[[1,1],[0,1]], [[0,0],[-1/k,1]]}``; ``k = 0`` gives the limit set."""
    tail = Fraction(-1, k) if k else Fraction(0)
    return MatrixSet([[[1, 1], [0, 1]], [[0, 0], [tail, 1]]])


@dataclass
class DiscontinuityRow:
    k: int
    distance: float
    interval: Interval


def subradius_discontinuity(ks=(1, 2, 3, 5, 10), t_max: int | None = None):
    """Subradius intervals along a family converging to a set with subradius 1.

    Every member of the family has a nilpotent product, so its interval is
    ``[0, 0]`` while the limit set's is ``[1, 1]``: the subradius jumps even
    though the sets converge.  Returns the limit row first.
    """
    limit = discontinuity_family(0)
    orth = PolyhedralCone.orthant(2)
    rows = [DiscontinuityRow(0, 0.0, subradius_bounds(limit, t_max or 4, orth).interval)]
    for k in ks:
        sk = discontinuity_family(k)
        rows.append(DiscontinuityRow(k, hausdorff_distance(sk, limit, "max"),
                                     subradius_bounds(sk, t_max or k + 1).interval))
    return rows
