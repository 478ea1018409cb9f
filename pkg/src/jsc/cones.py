"""Finitely generated cones: membership, invariance, positivity, primitivity,
embedded pairs and the chord-ratio constant of an embedded pair.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .errors import DomainError, SamplingError, SizeError, ValidationError
from .linalg import MatrixSet, as_matrix
from .lp import LPProblem, lp_feasible, lp_minimize

INTERIOR_EPS = 1e-7
FACET_COMBINATION_CAP = 50_000
BETA_CHUNK = 256
MIN_GAP = 1e-12


class Membership(enum.Enum):
    OUTSIDE = "outside"
    BOUNDARY = "boundary"
    INTERIOR = "interior"


@dataclass(frozen=True)
class MembershipResult:
    status: Membership
    degenerate: bool = False

    @property
    def is_member(self) -> bool:
        return self.status is not Membership.OUTSIDE

    @property
    def is_interior(self) -> bool:
        return self.status is Membership.INTERIOR


@dataclass(frozen=True, eq=False, init=False)
class PolyhedralCone:
    """Cone generated by finitely many rays, each stored with unit length."""

    dim: int
    generators: np.ndarray
    is_orthant: bool = False

    def __init__(self, generators, is_orthant: bool = False):
        g = np.atleast_2d(np.array(generators, dtype=float))
        if g.ndim != 2 or g.shape[0] == 0 or g.shape[1] == 0:
            raise ValidationError("cone needs at least one generator")
        if not np.all(np.isfinite(g)):
            raise ValidationError("cone generators must be finite")
        norms = np.linalg.norm(g, axis=1)
        if np.any(norms == 0):
            raise ValidationError("cone generators must be nonzero")
        g = g / norms[:, None]
        g.setflags(write=False)
        object.__setattr__(self, "dim", g.shape[1])
        object.__setattr__(self, "generators", g)
        object.__setattr__(self, "is_orthant", bool(is_orthant))

    @classmethod
    def orthant(cls, n: int) -> PolyhedralCone:
        return cls(np.eye(n), is_orthant=True)

    def __repr__(self):
        if self.is_orthant:
            return f"PolyhedralCone.orthant({self.dim})"
        return f"PolyhedralCone(dim={self.dim}, rays={len(self.generators)})"

    @cached_property
    def rank(self) -> int:
        return int(np.linalg.matrix_rank(self.generators, tol=1e-10))

    @property
    def is_full_dimensional(self) -> bool:
        return self.rank == self.dim

    @cached_property
    def is_pointed(self) -> bool:
        if self.is_orthant:
            return True
        # a line exists iff some nonzero conic combination of rays vanishes
        g = self.generators
        p = LPProblem(len(g),
                      a_eq=np.vstack([g.T, np.ones(len(g))]),
                      b_eq=np.concatenate([np.zeros(self.dim), [1.0]]))
        return not lp_feasible(p, 1e-12).feasible

    @property
    def is_proper(self) -> bool:
        return self.is_full_dimensional and self.is_pointed

    @cached_property
    def average_generator(self) -> np.ndarray:
        return self.generators.mean(axis=0)

    @cached_property
    def facets(self) -> tuple[np.ndarray, np.ndarray]:
        """``(H, E)`` with the cone equal to ``{x : H x >= 0, E x = 0}``.

        Rows of ``H`` are unit inner normals, rows of ``E`` span the
        orthogonal complement of the cone's linear span.  Derived by
        enumerating rank-deficient subsets of rays, so it is meant for low
        dimension; a :class:`SizeError` signals the caller to use LPs instead.
        """
        n = self.dim
        if self.is_orthant:
            return np.eye(n), np.zeros((0, n))
        g = self.generators
        u, s, vt = np.linalg.svd(g.T)
        r = self.rank
        span, comp = u[:, :r], u[:, r:].T
        y = g @ span
        if r == 1:
            signs = np.sign(np.round(y[:, 0], 12))
            if np.all(signs > 0):
                h = [span[:, 0]]
            elif np.all(signs < 0):
                h = [-span[:, 0]]
            else:
                h = []
            return np.array(h).reshape(-1, n), comp
        if math.comb(len(g), r - 1) > FACET_COMBINATION_CAP:
            raise SizeError("too many ray subsets for facet enumeration")
        normals = {}
        for idx in itertools.combinations(range(len(g)), r - 1):
            sub = y[list(idx)]
            _, sv, wt = np.linalg.svd(sub, full_matrices=True)
            if np.sum(sv > 1e-10) != r - 1:
                continue
            h = wt[-1]
            vals = y @ h
            if np.all(vals >= -1e-10):
                pass
            elif np.all(vals <= 1e-10):
                h = -h
            else:
                continue
            h = span @ h
            h = h / np.linalg.norm(h)
            normals.setdefault(tuple(np.round(h, 9)), h)
        return np.array(list(normals.values())).reshape(-1, n), comp


def _member_facets(cone, x, tol):
    h, e = cone.facets
    if e.shape[0] and np.max(np.abs(e @ x)) > tol:
        return False
    return h.shape[0] == 0 or float(np.min(h @ x)) >= -tol


def _member_lp(cone, x, tol):
    p = LPProblem(len(cone.generators), a_eq=cone.generators.T, b_eq=x)
    return lp_feasible(p, tol).feasible


def _is_member(cone, x, tol, method):
    if method == "lp":
        return _member_lp(cone, x, tol)
    try:
        return _member_facets(cone, x, tol)
    except SizeError:
        return _member_lp(cone, x, tol)


def cone_membership(x, k: PolyhedralCone, tol: float = 1e-9,
                    method: str = "auto") -> MembershipResult:
    """Classify ``x`` as outside, on the boundary, or interior to ``k``.

    The test is scale-free: ``x`` is normalised first.  Interior means the
    point stays a member after subtracting ``1e-7`` times the average unit
    generator, so near-boundary points report as boundary.
    """
    x = np.asarray(x, dtype=float).ravel()
    if x.shape != (k.dim,):
        raise ValidationError(f"vector of length {x.size} does not match cone dimension {k.dim}")
    nrm = float(np.linalg.norm(x))
    degenerate = not k.is_full_dimensional
    if nrm == 0.0:
        return MembershipResult(Membership.BOUNDARY, degenerate)
    x = x / nrm
    if not _is_member(k, x, tol, method):
        return MembershipResult(Membership.OUTSIDE, degenerate)
    if degenerate:
        return MembershipResult(Membership.BOUNDARY, True)
    shifted = x - INTERIOR_EPS * k.average_generator
    if _is_member(k, shifted, 0.0 if method != "lp" else 1e-13, method):
        return MembershipResult(Membership.INTERIOR)
    return MembershipResult(Membership.BOUNDARY)


def _images(a, k):
    a = as_matrix(a)
    if a.shape[0] != k.dim:
        raise ValidationError(f"matrix dimension {a.shape[0]} does not match cone dimension {k.dim}")
    return k.generators @ a.T


def is_invariant(a, k: PolyhedralCone, tol: float = 1e-9) -> bool:
    """True iff ``A g`` lies in ``k`` for every generator ``g``."""
    if k.is_orthant:
        a = as_matrix(a)
        scale = max(float(np.abs(a).max()), 1.0)
        return bool(np.all(a >= -tol * scale))
    return all(cone_membership(y, k, tol).is_member for y in _images(a, k))


def is_positive_map(a, k: PolyhedralCone, tol: float = 1e-9) -> bool:
    """True iff every generator is mapped into the interior of ``k``."""
    if not k.is_proper:
        raise DomainError("positivity is only defined for proper cones")
    return all(cone_membership(y, k, tol).is_interior for y in _images(a, k))


@dataclass(frozen=True)
class Primitivity:
    t: int | None
    t_max: int

    @property
    def primitive(self) -> bool:
        return self.t is not None


def default_primitivity_horizon(k: PolyhedralCone) -> int:
    n = k.dim
    return (n - 1) ** 2 + 1 if k.is_orthant else n * n + 1


def is_primitive(a, k: PolyhedralCone, t_max: int | None = None,
                 tol: float = 1e-9) -> Primitivity:
    """Smallest ``t <= t_max`` with ``A^t`` mapping ``k`` into its interior.

    On the orthant this is decided on the zero pattern, which is exact; the
    default horizon there is Wielandt's ``(n-1)^2 + 1``.
    """
    a = as_matrix(a)
    if t_max is None:
        t_max = default_primitivity_horizon(k)
    if t_max < 1:
        raise DomainError("t_max must be at least 1")
    if not is_invariant(a, k, tol):
        raise DomainError("matrix does not leave the cone invariant")
    if k.is_orthant:
        pattern = a > 0
        power = pattern.copy()
        for t in range(1, t_max + 1):
            if power.all():
                return Primitivity(t, t_max)
            power = (power.astype(np.int64) @ pattern.astype(np.int64)) > 0
        return Primitivity(None, t_max)
    if not k.is_proper:
        raise DomainError("primitivity is only defined for proper cones")
    scale = float(np.abs(a).max())
    if scale == 0.0:
        return Primitivity(None, t_max)
    b = a / scale
    power = b.copy()
    for t in range(1, t_max + 1):
        if is_positive_map(power, k, tol):
            return Primitivity(t, t_max)
        power = power @ b
        mx = float(np.abs(power).max())
        if mx == 0.0:
            break
        power /= mx
    return Primitivity(None, t_max)


def is_embedded_pair(outer: PolyhedralCone, inner: PolyhedralCone,
                     tol: float = 1e-9) -> bool:
    """True iff every ray of ``inner`` lies in the interior of ``outer``."""
    if outer.dim != inner.dim:
        raise ValidationError("cones of an embedded pair must share a dimension")
    if not outer.is_full_dimensional:
        return False
    return all(cone_membership(g, outer, tol).is_interior for g in inner.generators)


def extreme_rays(generators, tol: float = 1e-9) -> np.ndarray:
    """Drop duplicate and redundant rays, keeping input order."""
    g = np.array(generators, dtype=float)
    g = g / np.linalg.norm(g, axis=1)[:, None]
    uniq = []
    for v in g:
        if not any(np.allclose(v, u, atol=1e-12) for u in uniq):
            uniq.append(v)
    keep = list(uniq)
    i = 0
    while i < len(keep) and len(keep) > 1:
        others = np.array(keep[:i] + keep[i + 1:])
        p = LPProblem(len(others), a_eq=others.T, b_eq=keep[i])
        if lp_feasible(p, tol).feasible:
            keep.pop(i)
        else:
            i += 1
    return np.array(keep)


@dataclass(frozen=True)
class EmbeddedPair:
    outer: PolyhedralCone
    inner: PolyhedralCone
    beta_bound: float | None = None
    beta_estimate: float | None = None
    column_ratio_c: float | None = None
    inner_invariant: bool | None = None
    notes: dict = field(default_factory=dict)


def column_ratio(sigma: MatrixSet) -> float:
    """Largest max/min ratio within any column of any member."""
    if not sigma.is_positive():
        raise DomainError("positivity required: every entry must be > 0")
    return float(max((a.max(axis=0) / a.min(axis=0)).max() for a in sigma))


def construct_embedded_pair(sigma: MatrixSet, tol: float = 1e-9) -> EmbeddedPair:
    """Invariant pair for a set of entrywise positive matrices.

    Outer cone is the orthant, inner cone is ``{x >= 0 : max x <= c min x}``
    with ``c`` the worst column ratio; its chord constant is at most ``c**2``.
    """
    c = column_ratio(sigma)
    n = sigma.n
    outer = PolyhedralCone.orthant(n)
    if c == 1.0:
        rays = np.ones((1, n))
    else:
        verts = np.array(list(itertools.product((1.0, c), repeat=n)))
        rays = extreme_rays(verts, tol)
    inner = PolyhedralCone(rays)
    invariant = all(is_invariant(a, inner, tol) for a in sigma)
    return EmbeddedPair(outer, inner, beta_bound=c * c, column_ratio_c=c,
                        inner_invariant=invariant)


def line_interval(k: PolyhedralCone, p, d, method: str = "auto") -> tuple[float, float]:
    """Parameter range ``{s : p + s d in k}`` for a point ``p`` of ``k``.

    Endpoints may be infinite.
    """
    p = np.asarray(p, dtype=float)
    d = np.asarray(d, dtype=float)
    if method != "lp":
        try:
            return _line_interval_facets(k, p, d)
        except SizeError:
            pass
    return _line_interval_lp(k, p, d)


def _line_interval_facets(k, p, d):
    h, e = k.facets
    lo, hi = -math.inf, math.inf
    if e.shape[0] and np.max(np.abs(e @ d)) > 1e-12:
        lo = hi = 0.0
    hp, hd = h @ p, h @ d
    for a, b in zip(hp, hd):
        if b > 1e-15:
            lo = max(lo, -a / b)
        elif b < -1e-15:
            hi = min(hi, -a / b)
    return min(lo, 0.0), max(hi, 0.0)


def _line_interval_lp(k, p, d):
    g = k.generators
    nv = len(g) + 1
    a_eq = np.hstack([g.T, -d[:, None]])
    out = []
    for sgn in (1.0, -1.0):
        obj = np.zeros(nv)
        obj[-1] = sgn
        res = lp_minimize(LPProblem(nv, a_eq=a_eq, b_eq=p, free=(nv - 1,),
                                    objective=obj), 1e-10)
        if res.status == "unbounded":
            out.append(-sgn * math.inf)
        else:
            out.append(float(res.witness[-1]))
    return min(out[0], 0.0), max(out[1], 0.0)


def chord_ratio(outer_iv, inner_iv) -> float | None:
    """Largest chord ratio of one line, reading the segments in both directions.

    ``None`` when the outer segment is unbounded or the line passes through
    the apex (no gap between outer and inner endpoints).
    """
    a, b = outer_iv
    a2, b2 = inner_iv
    if not (math.isfinite(a) and math.isfinite(b)):
        return None
    ratios = []
    if a2 - a > MIN_GAP * (b - a):
        ratios.append((b2 - a) / (a2 - a))
    if b - b2 > MIN_GAP * (b - a):
        ratios.append((b - a2) / (b - b2))
    return max(ratios) if ratios else None


def estimate_beta(pair: EmbeddedPair, samples: int = 2000, seed: int = 0,
                  method: str = "auto") -> float:
    """Monte-Carlo lower estimate of the chord-ratio constant of ``pair``.

    Lines pass through a random point of the inner cone in a uniformly random
    direction.  Samples are drawn in fixed-size chunks, chunk ``i`` seeded by
    ``SeedSequence(seed, spawn_key=(i,))``, so a larger budget only appends
    lines and the estimate is nondecreasing in ``samples``.
    """
    if samples < 1:
        raise DomainError("samples must be positive")
    if not is_embedded_pair(pair.outer, pair.inner):
        raise DomainError("cones do not form an embedded pair")
    best, used = 1.0, 0
    n = pair.outer.dim
    gin = pair.inner.generators
    n_chunks = -(-samples // BETA_CHUNK)
    for c in range(n_chunks):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(c,)))
        count = min(BETA_CHUNK, samples - c * BETA_CHUNK)
        for _ in range(count):
            lam = rng.exponential(size=len(gin))
            p = lam @ gin
            p /= np.linalg.norm(p)
            d = rng.standard_normal(n)
            d /= np.linalg.norm(d)
            r = chord_ratio(line_interval(pair.outer, p, d, method),
                            line_interval(pair.inner, p, d, method))
            if r is not None:
                used += 1
                best = max(best, r)
    if used == 0:
        raise SamplingError(f"none of {samples} sampled lines gave a bounded chord")
    return best


def with_beta_estimate(pair: EmbeddedPair, samples: int = 2000, seed: int = 0) -> EmbeddedPair:
    est = estimate_beta(pair, samples, seed)
    return replace(pair, beta_estimate=est,
                   notes={**pair.notes, "beta_samples": samples, "beta_seed": seed})
