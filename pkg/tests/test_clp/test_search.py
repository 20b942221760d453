"""
Tests for closest lattice point search
"""

import numpy as np
import pytest

from src.clp.search import (
    ClosestPointSolver,
    LatticeBasis,
    babai,
    brute_force_closest,
    closest_point,
)
from src.common.errors import InvalidInput, SingularBasis, Unsupported


def well_conditioned_basis(rng, d):
    """Random basis near the identity with smallest singular value >= 0.5"""
    while True:
        B = np.eye(d) + 0.3 * rng.normal(size=(d, d))
        if np.linalg.svd(B, compute_uv=False)[-1] >= 0.5:
            return B


def unimodular(rng, d, steps=6):
    """Product of random integer row operations"""
    U = np.eye(d, dtype=np.int64)
    for _ in range(steps):
        i, j = rng.choice(d, size=2, replace=False)
        U[i] += int(rng.choice([-1, 1])) * U[j]
    return U


class TestLatticeBasis:
    """Test basis validation"""

    def test_singular(self):
        """Test rank-deficient bases"""
        with pytest.raises(SingularBasis):
            LatticeBasis(np.array([[1.0, 2.0], [2.0, 4.0]]))

    def test_not_square(self):
        """Test non-square bases"""
        with pytest.raises(InvalidInput):
            LatticeBasis(np.ones((2, 3)))

    def test_dimension_limit(self):
        """Test dimensions above 16"""
        with pytest.raises(Unsupported):
            LatticeBasis(np.eye(17))

    def test_read_only(self):
        """Test the stored basis cannot be modified"""
        basis = LatticeBasis(np.eye(2))
        with pytest.raises(ValueError):
            basis.B[0, 0] = 5.0


class TestClosestPoint:
    """Test exact search"""

    @pytest.mark.parametrize(
        "target,expected",
        [
            ((0.4, 1.6), (0, 2)),
            ((-0.6, 2.49), (-1, 2)),
            ((3.0, -7.0), (3, -7)),
        ],
    )
    def test_identity(self, target, expected):
        """Test Z^2 rounds each coordinate"""
        assert closest_point(np.eye(2), target).tolist() == list(expected)

    def test_tie_prefers_lexicographic_minimum(self):
        """Test four equidistant points resolve to (0, 0)"""
        assert closest_point(np.eye(2), (0.5, 0.5)).tolist() == [0, 0]
        assert brute_force_closest(np.eye(2), (0.5, 0.5)).tolist() == [0, 0]

    def test_diagonal(self, rng):
        """Test diagonal bases decouple"""
        diag = np.array([0.5, 2.0, 3.0])
        for _ in range(20):
            target = rng.normal(0.0, 5.0, size=3)
            expected = np.floor(target / diag + 0.5).astype(int)
            assert closest_point(np.diag(diag), target).tolist() == expected.tolist()

    def test_matches_brute_force(self, rng):
        """Test 200 random instances against exhaustive search"""
        for _ in range(200):
            d = int(rng.integers(2, 5))
            B = well_conditioned_basis(rng, d)
            target = rng.normal(0.0, 3.0, size=d)
            assert closest_point(B, target).tolist() == brute_force_closest(B, target).tolist()

    def test_babai_never_better(self, rng):
        """Test Babai distance bounds the exact distance from above"""
        for _ in range(100):
            B = rng.normal(size=(4, 4))
            if np.linalg.svd(B, compute_uv=False)[-1] < 0.1:
                continue
            solver = ClosestPointSolver(B)
            target = rng.normal(0.0, 3.0, size=4)
            exact = solver.distance2(target, solver.closest(target))
            assert solver.distance2(target, solver.babai(target)) >= exact - 1e-9

    def test_unimodular_invariance(self, rng):
        """Test a change of basis returns the same lattice point"""
        for _ in range(50):
            B = well_conditioned_basis(rng, 3)
            U = unimodular(rng, 3)
            target = rng.normal(0.0, 3.0, size=3)
            point = closest_point(B, target) @ B
            other = closest_point(U @ B, target) @ (U @ B)
            assert np.allclose(point, other, atol=1e-9)

    def test_solver_reuse(self, rng):
        """Test one solver answers many queries"""
        B = well_conditioned_basis(rng, 3)
        solver = ClosestPointSolver(B)
        for _ in range(10):
            target = rng.normal(size=3)
            assert solver.closest(target).tolist() == closest_point(B, target).tolist()

    def test_target_length(self):
        """Test mismatched target lengths"""
        with pytest.raises(InvalidInput):
            closest_point(np.eye(2), (1.0, 2.0, 3.0))


class TestBabai:
    """Test nearest-plane rounding"""

    def test_identity(self):
        """Test halves round up"""
        assert babai(np.eye(2), (0.5, -0.5)).tolist() == [1, 0]


class TestBruteForce:
    """Test the exhaustive oracle"""

    def test_dimension_limit(self):
        """Test brute force refuses large dimensions"""
        with pytest.raises(Unsupported):
            brute_force_closest(np.eye(5), np.zeros(5))

    def test_explicit_box(self):
        """Test a fixed box radius"""
        assert brute_force_closest(np.eye(2), (1.2, -0.7), box_radius=1).tolist() == [1, -1]
