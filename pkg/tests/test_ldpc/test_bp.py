"""
Tests for sum-product decoding
"""

import itertools

import numpy as np
import pytest

from src.common.errors import InvalidInput
from src.ldpc.bp import LLR_CLIP, bp_decode, check_to_variable, clip_llr
from src.ldpc.matrix import SparseBinaryMatrix, example_3x4
from src.ldpc.systematic import encode_bits, systematize
from tests.fixtures.test_data import HAMMING_7_4

# Every row has even weight, so the all-ones word is a codeword
EVEN_ROWS = ((1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 1))


def llr_for(bits, magnitude=20.0):
    """Confident LLRs: positive for 1"""
    return np.where(np.asarray(bits) == 1, magnitude, -magnitude)


class TestClipLlr:
    """Test LLR sanitizing"""

    def test_clip(self):
        """Test values beyond the clip level"""
        assert clip_llr([1e9, -1e9, 3.0]).tolist() == [LLR_CLIP, -LLR_CLIP, 3.0]

    def test_non_finite(self):
        """Test NaN and infinity are rejected"""
        with pytest.raises(InvalidInput):
            clip_llr([np.nan, 0.0])
        with pytest.raises(InvalidInput):
            clip_llr([np.inf])


class TestCheckToVariable:
    """Test the check-node rule under the log(P1/P0) convention"""

    def test_degree_two_passes_through(self):
        """Test a parity pair copies the other LLR"""
        H = SparseBinaryMatrix.from_dense([[1, 1]])
        out = check_to_variable(H, np.array([4.0, -3.0]))
        assert out == pytest.approx([-3.0, 4.0], abs=1e-9)

    def test_degree_three_sign(self):
        """Test two confident ones imply a zero"""
        H = SparseBinaryMatrix.from_dense([[1, 1, 1]])
        out = check_to_variable(H, np.array([0.0, 12.0, 12.0]))
        assert out[0] < -9.0

    def test_degree_three_mixed(self):
        """Test a one and a zero imply a one"""
        H = SparseBinaryMatrix.from_dense([[1, 1, 1]])
        out = check_to_variable(H, np.array([0.0, 12.0, -12.0]))
        assert out[0] > 9.0


class TestBpDecode:
    """Test flooding BP"""

    def test_noiseless(self):
        """Test confident codeword LLRs decode at once"""
        result = bp_decode(example_3x4(), llr_for([1, 0, 1, 1]))
        assert result.converged
        assert result.iterations == 0
        assert result.bits.tolist() == [1, 0, 1, 1]

    def test_corrects_single_weak_bit(self):
        """Test a wrong weak bit is fixed by the checks"""
        llr = llr_for([1, 0, 1, 1]).astype(float)
        llr[2] = -0.5
        result = bp_decode(example_3x4(), llr)
        assert result.converged
        assert result.iterations >= 1
        assert result.bits.tolist() == [1, 0, 1, 1]

    def test_all_zero_llr_never_converges(self):
        """Test zero posteriors block convergence"""
        result = bp_decode(example_3x4(), np.zeros(4), max_iter=7)
        assert not result.converged
        assert result.iterations == 7
        assert result.bits.tolist() == [0, 0, 0, 0]

    def test_wrong_length(self):
        """Test LLR vectors of the wrong length"""
        with pytest.raises(InvalidInput):
            bp_decode(example_3x4(), np.zeros(3))

    def test_antisymmetric(self, rng):
        """Test negating LLRs flips the decision on an even-weight code"""
        H = SparseBinaryMatrix.from_dense(EVEN_ROWS)
        for _ in range(50):
            llr = rng.normal(0.0, 2.0, size=4)
            plain = bp_decode(H, llr)
            flipped = bp_decode(H, -llr)
            assert plain.converged == flipped.converged
            assert np.allclose(flipped.posterior, -plain.posterior)
            if plain.converged:
                assert flipped.bits.tolist() == (1 - plain.bits).tolist()

    def test_matches_ml_on_hamming(self, rng):
        """Test converged BP agrees with exhaustive ML on the [7,4] code"""
        code = systematize(SparseBinaryMatrix.from_dense(HAMMING_7_4))
        codewords = np.array(
            [encode_bits(code, msg) for msg in itertools.product((0, 1), repeat=4)]
        )
        signs = 2.0 * codewords - 1.0
        sigma = 0.5

        converged = disagreements = 0
        for _ in range(1000):
            sent = codewords[rng.integers(len(codewords))]
            y = (2.0 * sent - 1.0) + sigma * rng.normal(size=7)
            llr = 2.0 * y / sigma**2
            result = bp_decode(code.H, llr)
            if not result.converged:
                continue
            converged += 1
            ml = codewords[int(np.argmax(signs @ llr))]
            disagreements += not np.array_equal(result.bits, ml)

        assert converged >= 900
        assert disagreements <= converged // 100
