"""Dense real matrices, matrix sets, norms, spectral radius and Kronecker lifts.

A "matrix" throughout the package is a square, finite, read-only float64
``numpy.ndarray``.  :class:`MatrixSet` is the finite ordered family the bound
engines enumerate products of.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, NumericalError, SizeError, ValidationError

NORM_KINDS = ("two", "one", "inf")
DEFAULT_DIM_CAP = 4096
GELFAND_MAX_ITER = 60


def default_tol(n: int) -> float:
    """Absolute tolerance for small matrices, relative above dimension 8."""
    return 1e-10 if n <= 8 else 1e-8


def as_matrix(a) -> np.ndarray:
    """Validate ``a`` and return it as a read-only float64 square array."""
    try:
        arr = np.array(a, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"not a real matrix: {exc}") from None
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"matrix must be square, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ValidationError("matrix dimension must be at least 1")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("matrix entries must be finite")
    arr.setflags(write=False)
    return arr


def _exact_rows(a) -> tuple[tuple[Fraction, ...], ...] | None:
    # Keeps rational data exact; floats are treated as inexact measurements.
    if isinstance(a, np.ndarray):
        if not np.issubdtype(a.dtype, np.integer) and a.dtype != object:
            return None
        a = a.tolist()
    rows = []
    for row in a:
        out = []
        for v in row:
            if isinstance(v, (bool, np.bool_)) or not isinstance(v, (Rational, np.integer)):
                return None
            out.append(Fraction(int(v)) if isinstance(v, np.integer) else Fraction(v))
        rows.append(tuple(out))
    return tuple(rows)


@dataclass(frozen=True, eq=False, init=False)
class MatrixSet:
    """A nonempty ordered family of equal-dimension square matrices.

    ``exact`` holds the members as :class:`fractions.Fraction` rows when every
    member was supplied with integer or rational entries.  The enumeration
    engine uses it to certify exactly-nilpotent products that floating point
    arithmetic would only show as tiny.
    """

    matrices: tuple[np.ndarray, ...]
    exact: tuple | None = None

    def __init__(self, members: Iterable):
        members = list(members)
        if not members:
            raise ValidationError("matrix set must be nonempty")
        exact = [_exact_rows(a) for a in members]
        mats = tuple(as_matrix(a) for a in members)
        n = mats[0].shape[0]
        for i, a in enumerate(mats):
            if a.shape[0] != n:
                raise ValidationError(
                    f"member {i} has dimension {a.shape[0]}, expected {n}")
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(
            self, "exact",
            tuple(exact) if all(e is not None for e in exact) else None)

    @property
    def m(self) -> int:
        return len(self.matrices)

    @property
    def n(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def stack(self) -> np.ndarray:
        return np.stack(self.matrices)

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def __getitem__(self, i):
        return self.matrices[i]

    def scaled(self, alpha: float) -> MatrixSet:
        return MatrixSet([alpha * a for a in self.matrices])

    def is_nonnegative(self) -> bool:
        return all(bool(np.all(a >= 0)) for a in self.matrices)

    def is_positive(self) -> bool:
        return all(bool(np.all(a > 0)) for a in self.matrices)


def _check_word(word: Sequence[int], m: int) -> list[int]:
    word = [int(i) for i in word]
    if not word:
        raise DomainError("product word must be nonempty")
    for i in word:
        if not 0 <= i < m:
            raise DomainError(f"word index {i} out of range [0, {m})")
    return word


def mat_product(word: Sequence[int], sigma: MatrixSet) -> np.ndarray:
    """Left-to-right product ``A[w0] @ A[w1] @ ... @ A[wt-1]``."""
    word = _check_word(word, sigma.m)
    p = np.array(sigma[word[0]])
    for i in word[1:]:
        p = p @ sigma[i]
    return p


def mat_power(a, t: int) -> np.ndarray:
    if t < 0:
        raise DomainError("matrix power must be nonnegative")
    return np.linalg.matrix_power(np.asarray(a, dtype=float), t)


def exact_product(word: Sequence[int], sigma: MatrixSet):
    """Exact rational product of ``word``; requires ``sigma.exact``."""
    if sigma.exact is None:
        raise DomainError("matrix set carries no exact entries")
    word = _check_word(word, sigma.m)
    p = sigma.exact[word[0]]
    for i in word[1:]:
        p = _fmul(p, sigma.exact[i])
    return p


def _fmul(a, b):
    n = len(a)
    cols = list(zip(*b))
    return tuple(tuple(sum((a[i][k] * cols[j][k] for k in range(n)), Fraction(0))
                       for j in range(n)) for i in range(n))


def is_exactly_nilpotent(p) -> bool:
    """True when the exact rational matrix ``p`` satisfies ``p**n == 0``."""
    n = len(p)
    q = p
    # p**n == 0 iff p**(2**j) == 0 for 2**j >= n
    steps = max(0, math.ceil(math.log2(n))) if n > 1 else 0
    for _ in range(steps):
        if not any(any(row) for row in q):
            return True
        q = _fmul(q, q)
    return not any(any(row) for row in q)


def trace(a) -> float:
    return float(np.trace(as_matrix(a)))


def operator_norm(a, norm_kind: str = "two") -> float:
    """Induced matrix norm: ``two`` (largest singular value), ``one`` or ``inf``."""
    a = as_matrix(a)
    if not a.any():
        return 0.0
    return float(operator_norms(a[None], norm_kind)[0])


def operator_norms(stack: np.ndarray, norm_kind: str = "two") -> np.ndarray:
    """Vectorised :func:`operator_norm` over a ``(N, n, n)`` stack."""
    if norm_kind == "two":
        if stack.shape[0] == 0:
            return np.zeros(0)
        return np.linalg.norm(stack, ord=2, axis=(1, 2))
    if norm_kind == "one":
        return np.abs(stack).sum(axis=1).max(axis=1)
    if norm_kind == "inf":
        return np.abs(stack).sum(axis=2).max(axis=1)
    raise ValidationError(f"unknown norm kind {norm_kind!r}; expected one of {NORM_KINDS}")


def spectral_radius(a, tol: float | None = None) -> float:
    """Largest eigenvalue modulus of ``a``.

    Eigenvalues come from LAPACK's Hessenberg/real-Schur reduction.  If that
    fails to converge the Gelfand estimate ``||A^(2^j)||^(1/2^j)`` is refined
    instead; it approaches the spectral radius from above.
    """
    a = as_matrix(a)
    if tol is None:
        tol = default_tol(a.shape[0])
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    if not a.any():
        return 0.0
    try:
        return float(np.max(np.abs(np.linalg.eigvals(a))))
    except np.linalg.LinAlgError:
        return gelfand_estimate(a, tol)


def spectral_radii(stack: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Vectorised :func:`spectral_radius` over a ``(N, n, n)`` stack."""
    if stack.shape[0] == 0:
        return np.zeros(0)
    try:
        return np.abs(np.linalg.eigvals(stack)).max(axis=1)
    except np.linalg.LinAlgError:
        return np.array([spectral_radius(a, tol) for a in stack])


def gelfand_estimate(a, tol: float, max_iter: int = GELFAND_MAX_ITER) -> float:
    """Refine ``||A^(2^j)||_2^(1/2^j)`` until successive values differ by < tol."""
    b = np.array(a, dtype=float)
    log_scale = 0.0
    prev = math.inf
    history = []
    for j in range(max_iter):
        nrm = float(np.linalg.norm(b, 2))
        if nrm == 0.0:
            return 0.0
        est = math.exp((math.log(nrm) + log_scale) / 2.0**j)
        history.append(est)
        if abs(est - prev) < tol:
            return est
        prev = est
        b = b / nrm
        log_scale = 2.0 * (log_scale + math.log(nrm))
        b = b @ b
    raise NumericalError(
        f"Gelfand estimate did not settle within {max_iter} squarings",
        {"estimates": history[-5:], "tol": tol})


def _cap_check(dim: int, dim_cap: int, what: str):
    if dim > dim_cap:
        raise SizeError(f"{what} has dimension {dim}, above the cap {dim_cap}")


def kron(a, b, dim_cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _cap_check(a.shape[0] * b.shape[0], dim_cap, "Kronecker product")
    return np.kron(a, b)


def kron_power(a, k: int, dim_cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """k-fold Kronecker power, built as ``A (x) A^(x)(k-1)``."""
    a = as_matrix(a)
    if k < 1:
        raise DomainError("Kronecker power must be at least 1")
    _cap_check(a.shape[0] ** k, dim_cap, f"Kronecker power k={k}")
    out = np.array(a)
    for _ in range(k - 1):
        out = np.kron(a, out)
    return out
