from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from jsc.bounds import enumerate_bounds
from jsc.cones import PolyhedralCone
from jsc.errors import DomainError
from jsc.linalg import MatrixSet
from jsc.subradius import conic_certificate, conic_subradius_lower, subradius_bounds

import oracles

ORTH2 = PolyhedralCone.orthant(2)
LIMIT = [[[1, 1], [0, 1]], [[0, 0], [0, 1]]]
CIRCULANT = [[[2, 1], [1, 2]], [[3, 1], [1, 3]]]
# HiGHS bisection in tests/oracles.py
CIRCULANT_CONIC = 2.9999999999999996


def test_limit_set_conic_bound_is_one():
    s = MatrixSet(LIMIT)
    assert conic_subradius_lower(s, ORTH2) == pytest.approx(1.0, abs=1e-8)
    x = conic_certificate(s, ORTH2, 1.0)
    assert x is not None and np.allclose(x, [0, 1])


def test_scalar_set():
    assert conic_subradius_lower(MatrixSet([2 * np.eye(2)]), ORTH2) == pytest.approx(2.0)
    iv = subradius_bounds(MatrixSet([2 * np.eye(2)]), 4, ORTH2).interval
    assert iv.lower == pytest.approx(2.0) and iv.upper == pytest.approx(2.0)


def test_circulant_pair_matches_oracles():
    s = MatrixSet(CIRCULANT)
    r = conic_subradius_lower(s, ORTH2)
    assert r == pytest.approx(CIRCULANT_CONIC, abs=1e-8)
    brute = min(oracles.brute_bounds(CIRCULANT, 10)["sub_rho"])
    assert r == pytest.approx(brute, rel=0.02)
    assert r <= min(enumerate_bounds(s, 10).upper_sub_rho) + 1e-9


def test_general_cone_route_agrees_with_orthant():
    s = MatrixSet(CIRCULANT)
    as_generators = PolyhedralCone(np.eye(2))
    assert conic_subradius_lower(s, as_generators) == pytest.approx(
        conic_subradius_lower(s, ORTH2), abs=1e-7)


def test_invariance_required():
    with pytest.raises(DomainError):
        conic_subradius_lower(MatrixSet([[[0, -1], [1, 0]]]), ORTH2)
    with pytest.raises(DomainError):
        conic_subradius_lower(MatrixSet(LIMIT), PolyhedralCone.orthant(3))


def test_interval_for_limit_set():
    rep = subradius_bounds(MatrixSet(LIMIT), 4, ORTH2)
    assert rep.interval.lower == pytest.approx(1.0, abs=1e-8)
    assert rep.interval.upper == pytest.approx(1.0, abs=1e-12)


def test_nilpotent_member_gives_zero_interval():
    s = MatrixSet([[[1, 1], [0, 1]], [[0, 0], [Fraction(-1, 3), 1]]])
    with pytest.warns(UserWarning, match="not invariant"):
        rep = subradius_bounds(s, 8, ORTH2)
    assert (rep.interval.lower, rep.interval.upper) == (0.0, 0.0)
    assert rep.conic_lower is None and rep.provenance["cone_used"] is False


def test_no_cone_gives_trivial_lower():
    rep = subradius_bounds(MatrixSet(CIRCULANT), 4)
    assert rep.interval.lower == 0.0 and rep.upper == pytest.approx(3.0)


def test_random_sets_keep_lower_below_upper():
    rng = np.random.default_rng(21)
    for _ in range(15):
        s = MatrixSet(list(rng.uniform(0, 2, (2, 3, 3))))
        low = conic_subradius_lower(s, PolyhedralCone.orthant(3))
        rep = enumerate_bounds(s, 6)
        assert all(low <= u + 1e-9 for u in rep.upper_sub_rho)
        assert low == pytest.approx(oracles.conic_lower_orthant(list(s)), abs=1e-7)
