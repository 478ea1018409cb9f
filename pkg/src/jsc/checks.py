"""Cone diagnostics and self-verification of a matrix set's bound invariants."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .bounds import DEFAULT_BUDGET, enumerate_bounds
from .cones import (EmbeddedPair, PolyhedralCone, construct_embedded_pair,
                    estimate_beta, is_embedded_pair, is_invariant, is_positive_map,
                    is_primitive)
from .errors import JscError
from .kronlift import kron_lift_bounds, trace_kron_inequality
from .linalg import DEFAULT_DIM_CAP, MatrixSet, kron, kron_power
from .subradius import conic_subradius_lower


@dataclass
class MemberCheck:
    index: int
    invariant: bool
    positive: bool | None
    primitive_t: int | None
    horizon: int | None


@dataclass
class ConeCheckReport:
    cone: str
    pointed: bool
    full_dimensional: bool
    members: list[MemberCheck]
    verdict: str
    inner_cone: str | None = None
    embedded: bool | None = None
    inner_invariant: bool | None = None
    beta_estimate: float | None = None
    beta_samples: int | None = None
    seed: int | None = None
    column_ratio_c: float | None = None
    beta_bound: float | None = None
    constructed_rays: int | None = None
    constructed_invariant: bool | None = None


def cone_check(sigma: MatrixSet, cone: PolyhedralCone, inner: PolyhedralCone | None = None,
               samples: int = 2000, seed: int = 0) -> ConeCheckReport:
    members = []
    proper = cone.is_proper
    for i, a in enumerate(sigma):
        inv = is_invariant(a, cone)
        pos = is_positive_map(a, cone) if (inv and proper) else None
        prim = is_primitive(a, cone) if (inv and proper) else None
        members.append(MemberCheck(i, inv, pos, prim.t if prim else None,
                                   prim.t_max if prim else None))
    all_inv = all(c.invariant for c in members)
    rep = ConeCheckReport(repr(cone), cone.is_pointed, cone.is_full_dimensional, members,
                          "invariant" if all_inv else "not invariant")
    if inner is not None:
        rep.inner_cone = repr(inner)
        rep.embedded = is_embedded_pair(cone, inner)
        rep.inner_invariant = all(is_invariant(a, inner) for a in sigma)
        if rep.embedded:
            rep.beta_estimate = estimate_beta(EmbeddedPair(cone, inner), samples, seed)
            rep.beta_samples, rep.seed = samples, seed
    if sigma.is_positive():
        pair = construct_embedded_pair(sigma)
        rep.column_ratio_c = pair.column_ratio_c
        rep.beta_bound = pair.beta_bound
        rep.constructed_rays = len(pair.inner.generators)
        rep.constructed_invariant = pair.inner_invariant
    return rep


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerifyReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, passed, detail=""):
        self.checks.append(CheckResult(name, bool(passed), detail))


def verify(sigma: MatrixSet, cone: PolyhedralCone | None = None, t_max: int = 6,
           k_max: int = 3, tol: float = 1e-9, budget: int = DEFAULT_BUDGET,
           dim_cap: int = DEFAULT_DIM_CAP) -> VerifyReport:
    """Check the bound invariants that must hold for any input set."""
    out = VerifyReport()
    rep = enumerate_bounds(sigma, t_max, budget=budget, tol=tol)
    bad = [t for i, t in enumerate(rep.t_values)
           if rep.lower_jsr_rho[i] > rep.upper_jsr[i] + tol
           or (rep.lower_jsr_trace[i] is not None
               and rep.lower_jsr_trace[i] > rep.lower_jsr_rho[i] + tol)]
    out.add("bound ordering", not bad, f"violations at t={bad}" if bad else f"t=1..{t_max}")
    bad = [t for t in rep.t_values if 2 * t <= t_max
           and rep.upper_jsr[2 * t - 1] > rep.upper_jsr[t - 1] + tol]
    out.add("norm bound doubling", not bad, f"violations at t={bad}" if bad else "")

    mats = list(sigma)[:3]
    worst = 0.0
    for a, b, c, d in itertools.product(mats, repeat=4):
        lhs = kron(a, b) @ kron(c, d)
        scale = max(1.0, float(np.abs(lhs).max()))
        worst = max(worst, float(np.abs(lhs - kron(a @ c, b @ d)).max()) / scale)
    out.add("mixed-product identity", worst <= 1e-10, f"max rel err {worst:.3g}")
    worst = 0.0
    for a in sigma:
        tr = float(np.trace(a))
        for k in (2, 3):
            if sigma.n ** k > dim_cap:
                continue
            err = abs(float(np.trace(kron_power(a, k))) - tr ** k)
            worst = max(worst, err / max(1.0, abs(tr) ** k))
    out.add("trace-power identity", worst <= 1e-10, f"max rel err {worst:.3g}")

    undefined, failed = 0, []
    for k, t in itertools.product((1, 2), (1, 2, 3)):
        if sigma.n ** k > dim_cap or sigma.m ** t > budget:
            continue
        chk = trace_kron_inequality(sigma, k, t, tol, dim_cap, budget)
        if chk.holds is None:
            undefined += 1
        elif not chk.holds:
            failed.append((k, t))
    out.add("trace-Kronecker inequality", not failed,
            f"failed at (k,t)={failed}" if failed else f"{undefined} undefined cases skipped")

    orth = PolyhedralCone.orthant(sigma.n)
    for i, a in enumerate(sigma):
        if not is_invariant(a, orth) or not is_primitive(a, orth).primitive:
            continue
        ev = np.linalg.eigvals(a)
        order = np.argsort(-np.abs(ev))
        top = ev[order[0]]
        gap = abs(ev[order[0]]) - abs(ev[order[1]]) if len(ev) > 1 else np.inf
        ok = abs(top.imag) <= 1e-8 and top.real > 0 and gap > 1e-8
        out.add(f"Perron-Frobenius (member {i})", ok, f"dominant {top:.6g}, gap {gap:.3g}")

    if cone is not None and all(is_invariant(a, cone) for a in sigma):
        kk = k_max
        while kk > 1 and sigma.n ** kk > dim_cap:
            kk -= 1
        kr = kron_lift_bounds(sigma, kk, cone, dim_cap)
        lo, hi = rep.best_interval_jsr.lower, rep.best_interval_jsr.upper
        ok = all(l <= hi + tol and u >= lo - tol for l, u in zip(kr.lower_k, kr.upper_k))
        out.add("Kronecker sandwich", ok, f"k=1..{kk} against JSR [{lo:.10g}, {hi:.10g}]")
        try:
            low = conic_subradius_lower(sigma, cone)
            up = min(rep.upper_sub_rho)
            out.add("conic subradius bound", low <= up + tol, f"{low:.10g} <= {up:.10g}")
        except JscError as exc:
            out.add("conic subradius bound", False, str(exc))

    if sigma.is_positive():
        pair = construct_embedded_pair(sigma)
        ok = is_embedded_pair(pair.outer, pair.inner) and bool(pair.inner_invariant)
        out.add("embedded pair construction", ok, f"c={pair.column_ratio_c:.6g}")
        low = conic_subradius_lower(sigma, orth)
        need = min(rep.upper_sub_rho) / pair.beta_bound
        out.add("subradius achievability", low >= need - 1e-6,
                f"conic {low:.10g} >= upper/c^2 {need:.10g}")
    return out
