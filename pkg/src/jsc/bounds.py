"""Exhaustive product enumeration and the bound sequences derived from it.

Every product of length ``t`` is kept as a mantissa matrix scaled into
``[0.5, 1)`` by a power of two plus an integer exponent.  Power-of-two
scaling is exact, so the stored products agree bit-for-bit with plain
floating point left-to-right products while never overflowing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericalError, ResourceError
from .linalg import (MatrixSet, exact_product, is_exactly_nilpotent,
                     operator_norms, spectral_radii)

DEFAULT_BUDGET = 2_000_000
EXACT_CHECK_CAP = 20_000
LN2 = math.log(2.0)


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float
    collapsed: bool = False

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)


def make_interval(lower: float, upper: float, tol: float) -> Interval:
    """Interval from bounds; noise-level inversions collapse to the midpoint."""
    if lower <= upper:
        return Interval(lower, upper)
    if lower - upper <= tol * max(1.0, abs(upper)):
        mid = 0.5 * (lower + upper)
        return Interval(mid, mid, collapsed=True)
    raise NumericalError(f"lower bound {lower!r} exceeds upper bound {upper!r}",
                         {"lower": lower, "upper": upper, "tol": tol})


@dataclass
class BoundReport:
    """Per-length bound sequences for the joint spectral radius and subradius.

    Entry ``i`` of every list refers to product length ``t_values[i]``.
    ``None`` marks a trace bound that is undefined because no product of that
    length has a nonnegative trace.
    """

    n: int
    m: int
    norm_kind: str
    t_values: list[int]
    products: list[int]
    upper_jsr: list[float]
    lower_jsr_rho: list[float]
    lower_jsr_trace: list[float | None]
    upper_sub_rho: list[float]
    upper_sub_norm: list[float]
    max_trace_root: list[float | None]
    best_interval_jsr: Interval
    best_interval_sub: Interval
    provenance: dict[str, list[str]] = field(default_factory=dict)
    exact_zero_products: int = 0


@dataclass
class _LevelStats:
    t: int
    count: int
    norm_max: float = math.nan
    norm_min: float = math.nan
    norm_argmax: int = -1
    norm_argmin: int = -1
    rho_max: float = 0.0
    rho_min: float = 0.0
    rho_argmax: int = -1
    rho_argmin: int = -1
    trace_log_max: float | None = None
    trace_argmax: int = -1
    exact_zeros: int = 0


def admissible_t_max(m: int, budget: int) -> int:
    """Largest length whose ``m**t`` products fit in the budget."""
    if m == 1:
        return 10**9
    t = 0
    while m ** (t + 1) <= budget:
        t += 1
    return t


class ProductTree:
    """Breadth-first enumeration of all products with memoised prefixes.

    ``parents[t]`` and ``letters[t]`` hold, for every product of length
    ``t + 1``, the index of its prefix and its last letter, so the word of any
    product can be recovered after deduplication.
    """

    def __init__(self, sigma: MatrixSet, budget: int = DEFAULT_BUDGET,
                 dedup_tol: float | None = None):
        self.sigma = sigma
        self.budget = budget
        self.dedup_tol = dedup_tol
        self.parents: list[np.ndarray] = []
        self.letters: list[np.ndarray] = []
        self._exact_checks = 0
        self.exact_truncated = False

    def word(self, t: int, idx: int) -> tuple[int, ...]:
        out = []
        for level in range(t - 1, -1, -1):
            out.append(int(self.letters[level][idx]))
            idx = int(self.parents[level][idx])
        return tuple(reversed(out))

    def levels(self, t_max: int):
        """Yield ``(t, mantissas, exponents, zero_mask)`` for ``t = 1..t_max``."""
        sigma = self.sigma
        m = sigma.m
        if t_max < 1:
            raise DomainError("t_max must be at least 1")
        if self.dedup_tol is None and m ** t_max > self.budget:
            raise ResourceError(
                f"{m}^{t_max} products exceed the budget {self.budget}; "
                f"largest admissible t_max is {admissible_t_max(m, self.budget)}")
        gens = sigma.stack
        mant, expo, zero = _normalise(gens)
        parent = np.full(m, -1, dtype=np.int64)
        letter = np.arange(m, dtype=np.int64)
        for t in range(1, t_max + 1):
            if t > 1:
                size = mant.shape[0] * m
                if size > self.budget:
                    raise ResourceError(
                        f"{size} products at length {t} exceed the budget "
                        f"{self.budget}; largest admissible t_max is {t - 1}")
                raw = np.matmul(mant[:, None], gens[None]).reshape(-1, sigma.n, sigma.n)
                parent = np.repeat(np.arange(mant.shape[0], dtype=np.int64), m)
                letter = np.tile(np.arange(m, dtype=np.int64), mant.shape[0])
                prev_expo = np.repeat(expo, m)
                prev_zero = np.repeat(zero, m)
                mant, e2, zero = _normalise(raw)
                expo = prev_expo + e2
                zero |= prev_zero
            if self.dedup_tol is not None:
                keep = self._dedup(mant, expo, zero)
                mant, expo, zero = mant[keep], expo[keep], zero[keep]
                parent, letter = parent[keep], letter[keep]
            self.parents.append(parent)
            self.letters.append(letter)
            yield t, mant, expo, zero

    def _dedup(self, mant, expo, zero):
        full = np.ldexp(mant, expo[:, None, None]).reshape(mant.shape[0], -1)
        key = np.round(full / self.dedup_tol)
        _, first = np.unique(key, axis=0, return_index=True)
        return np.sort(first)

    def exact_nilpotent(self, t: int, idx: int):
        """``(nilpotent, is_zero)`` for product ``idx`` of length ``t``, or None."""
        if self.sigma.exact is None:
            return None
        if self._exact_checks >= EXACT_CHECK_CAP:
            self.exact_truncated = True
            return None
        self._exact_checks += 1
        p = exact_product(self.word(t, idx), self.sigma)
        is_zero = not any(any(row) for row in p)
        return (is_zero or is_exactly_nilpotent(p)), is_zero


def _normalise(stack):
    mx = np.abs(stack).reshape(stack.shape[0], -1).max(axis=1)
    _, e = np.frexp(mx)
    zero = mx == 0.0
    e = np.where(zero, 0, e).astype(np.int64)
    return np.ldexp(stack, -e[:, None, None]), e, zero


def _log_values(vals, expo):
    with np.errstate(divide="ignore"):
        return np.log(vals) + expo * LN2


def _scan_level(tree, t, mant, expo, zero, norm_kind, want_norms, n):
    st = _LevelStats(t, mant.shape[0])
    rho = spectral_radii(mant)
    rho[zero] = 0.0
    # tiny eigenvalues from exactly nilpotent products are certified to zero
    if tree.sigma.exact is not None:
        thresh = 1e-12 ** (1.0 / n)
        for idx in np.flatnonzero((rho > 0) & (rho <= thresh)):
            res = tree.exact_nilpotent(t, idx)
            if res is not None and res[0]:
                rho[idx] = 0.0
                st.exact_zeros += 1
                if res[1]:
                    zero[idx] = True
                    mant[idx] = 0.0
    log_rho = _log_values(rho, expo)
    st.rho_argmax = int(np.argmax(log_rho))
    st.rho_argmin = int(np.argmin(log_rho))
    st.rho_max = math.exp(log_rho[st.rho_argmax] / t)
    st.rho_min = math.exp(log_rho[st.rho_argmin] / t)
    tr = np.trace(mant, axis1=1, axis2=2)
    nonneg = tr >= 0
    if nonneg.any():
        log_tr = np.where(nonneg, _log_values(np.where(nonneg, tr, 1.0), expo), -np.inf)
        log_tr[nonneg & (tr == 0)] = -np.inf
        st.trace_argmax = int(np.argmax(log_tr))
        st.trace_log_max = float(log_tr[st.trace_argmax])  # log of max trace
    if want_norms:
        nrm = operator_norms(mant, norm_kind)
        nrm[zero] = 0.0
        log_n = _log_values(nrm, expo)
        st.norm_argmax = int(np.argmax(log_n))
        st.norm_argmin = int(np.argmin(log_n))
        st.norm_max = math.exp(log_n[st.norm_argmax] / t)
        st.norm_min = math.exp(log_n[st.norm_argmin] / t)
    return st


def scan(sigma: MatrixSet, t_max: int, norm_kind: str = "two",
         dedup_tol: float | None = None, budget: int = DEFAULT_BUDGET,
         want_norms: bool = True):
    """Run the enumeration and return ``(tree, per-level stats)``."""
    tree = ProductTree(sigma, budget, dedup_tol)
    stats = [_scan_level(tree, t, mant, expo, zero, norm_kind, want_norms, sigma.n)
             for t, mant, expo, zero in tree.levels(t_max)]
    return tree, stats


def _root(log_value, t, shift=0.0):
    if log_value is None:
        return None
    return math.exp((log_value - shift) / t)


def _fmt_word(word):
    return ".".join(str(i) for i in word)


def enumerate_bounds(sigma: MatrixSet, t_max: int, norm_kind: str = "two",
                     dedup_tol: float | None = None, budget: int = DEFAULT_BUDGET,
                     subradius_lower: float = 0.0, tol: float = 1e-9) -> BoundReport:
    """Bound sequences over all products of length ``1..t_max``.

    Per length ``t`` the report holds max/min of ``||A||^(1/t)`` and
    ``rho(A)^(1/t)`` and ``(max trace(A)/n)^(1/t)`` over the products.  The
    best intervals combine all lengths; ``subradius_lower`` (a conic bound,
    default 0) is the lower end of the subradius interval.
    """
    tree, stats = scan(sigma, t_max, norm_kind, dedup_tol, budget)
    n = sigma.n
    log_n = math.log(n)
    rep = BoundReport(
        n=n, m=sigma.m, norm_kind=norm_kind,
        t_values=[s.t for s in stats],
        products=[s.count for s in stats],
        upper_jsr=[s.norm_max for s in stats],
        lower_jsr_rho=[s.rho_max for s in stats],
        lower_jsr_trace=[_root(s.trace_log_max, s.t, log_n) for s in stats],
        upper_sub_rho=[s.rho_min for s in stats],
        upper_sub_norm=[s.norm_min for s in stats],
        max_trace_root=[_root(s.trace_log_max, s.t) for s in stats],
        best_interval_jsr=Interval(0.0, 0.0),
        best_interval_sub=Interval(0.0, 0.0),
        exact_zero_products=sum(s.exact_zeros for s in stats),
    )
    prov = {k: [] for k in ("upper_jsr", "lower_jsr_rho", "lower_jsr_trace",
                            "upper_sub_rho", "upper_sub_norm")}
    for s in stats:
        w = lambda i: _fmt_word(tree.word(s.t, i))  # noqa: E731
        prov["upper_jsr"].append(f"max-norm[{norm_kind}] word={w(s.norm_argmax)}")
        prov["lower_jsr_rho"].append(f"max-rho word={w(s.rho_argmax)}")
        prov["lower_jsr_trace"].append(
            "undefined: no nonnegative trace" if s.trace_log_max is None
            else f"max-trace/n word={w(s.trace_argmax)}")
        tag = " exact-nilpotent" if s.exact_zeros and s.rho_min == 0.0 else ""
        prov["upper_sub_rho"].append(f"min-rho word={w(s.rho_argmin)}{tag}")
        prov["upper_sub_norm"].append(f"min-norm[{norm_kind}] word={w(s.norm_argmin)}")
    if tree.exact_truncated:
        prov["notes"] = [f"exact nilpotency checks capped at {EXACT_CHECK_CAP}"]
    rep.provenance = prov
    lows = rep.lower_jsr_rho + [v for v in rep.lower_jsr_trace if v is not None]
    rep.best_interval_jsr = make_interval(max(lows), min(rep.upper_jsr), tol)
    sub_up = min(rep.upper_sub_rho + rep.upper_sub_norm)
    rep.best_interval_sub = make_interval(subradius_lower, sub_up, tol)
    return rep


@dataclass
class TraceSequence:
    """Maximal trace and spectral-radius roots per product length.

    ``s[i]`` is ``max trace(A)^(1/t)`` over products with nonnegative trace
    (None if there are none), ``r[i]`` is ``max rho(A)^(1/t)``.
    """

    t_values: list[int]
    s: list[float | None]
    r: list[float]
    primitive_member: bool | None
    primitive_index: int | None
    window: list[int]
    s_width: float
    r_width: float
    oscillating: bool


def _width(vals):
    vals = [v for v in vals if v is not None]
    return max(vals) - min(vals) if vals else math.nan


def trace_sequence(sigma: MatrixSet, t_max: int, window: int = 6,
                   osc_tol: float = 0.05, budget: int = DEFAULT_BUDGET) -> TraceSequence:
    """Trace and spectral-radius sequences plus a convergence diagnostic.

    The diagnostic reports whether some member is primitive on the orthant
    (None when the set is not entrywise nonnegative) and the spread of both
    sequences over the last ``window`` lengths.  ``oscillating`` is set when
    either spread exceeds ``osc_tol`` times the largest value in the window.
    """
    from .cones import PolyhedralCone, is_primitive

    _, stats = scan(sigma, t_max, budget=budget, want_norms=False)
    s = [_root(st.trace_log_max, st.t) for st in stats]
    r = [st.rho_max for st in stats]
    prim, prim_idx = None, None
    if sigma.is_nonnegative():
        orth = PolyhedralCone.orthant(sigma.n)
        prim = False
        for i, a in enumerate(sigma):
            if is_primitive(a, orth).primitive:
                prim, prim_idx = True, i
                break
    lo = max(0, len(stats) - window)
    ws, wr = s[lo:], r[lo:]
    s_width, r_width = _width(ws), _width(wr)
    ref = max([v for v in ws + wr if v is not None] or [0.0])
    widths = [w for w in (s_width, r_width) if not math.isnan(w)]
    osc = bool(widths) and max(widths) > osc_tol * ref
    return TraceSequence([st.t for st in stats], s, r, prim, prim_idx,
                         [st.t for st in stats[lo:]], s_width, r_width, osc)
