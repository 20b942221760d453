"""
Tests for two-stage decoding
"""

from dataclasses import replace

import numpy as np

from src.channel.fading import fixed_frame, sample_fading, transmit
from src.common.models import DecoderConfig
from src.decoder import miml
from src.decoder.pipeline import full_decode
from src.latcore.lattice import encode
from tests.fixtures.test_data import LatticeTestDataFactory


class TestFullDecode:
    """Test the decoder end to end"""

    def test_noiseless_round_trip(self, sqrt10_spec, cubic_spec, rng):
        """Test 100 noiseless frames decode exactly for n = 2 and n = 3"""
        for spec in (sqrt10_spec, cubic_spec):
            for _ in range(100):
                msg, z = LatticeTestDataFactory.random_point_args(spec, rng)
                point = encode(spec, msg, z)
                frame = sample_fading(spec.n, 1.0, rng)
                y = transmit(point.x, frame, 0.0, rng)
                result = full_decode(spec, y, frame, 0.01, truth=point)
                assert result.frame_ok
                assert result.stage1_ok and result.stage2_ok
                assert result.bp_converged
                assert np.allclose(result.x_hat, point.x)
                assert result.c_hat.tolist() == point.c.tolist()

    def test_unit_fading_round_trip(self, sqrt10_spec, cubic_spec, rng):
        """Test unit fading with sigma2 = 1e-8 decodes every frame exactly"""
        for spec in (sqrt10_spec, cubic_spec):
            frame = fixed_frame(np.ones(spec.n))
            for _ in range(100):
                msg, z = LatticeTestDataFactory.random_point_args(spec, rng)
                point = encode(spec, msg, z)
                y = transmit(point.x, frame, 1e-8, rng)
                result = full_decode(spec, y, frame, 1e-8, truth=point)
                assert result.frame_ok

    def test_without_truth(self, sqrt10_spec, rng):
        """Test stage flags stay unset without ground truth"""
        point = encode(sqrt10_spec, [1], np.zeros(8, dtype=int))
        frame = fixed_frame([1.0, 1.0])
        result = full_decode(sqrt10_spec, transmit(point.x, frame, 0.0, rng), frame, 0.1)
        assert result.stage1_ok is None
        assert result.frame_ok is None
        assert result.c_hat.tolist() == [1, 0, 1, 1]

    def test_stage_one_error_attributed(self, sqrt10_spec, rng, mocker):
        """Test a wrong prime component fails stage one but not stage two"""
        point = encode(sqrt10_spec, [1], np.zeros(8, dtype=int))
        frame = fixed_frame([1.0, 1.2])
        y = transmit(point.x, frame, 0.0, rng)

        honest = miml.mi_ml(
            sqrt10_spec.prime.embed_DM, miml.noise_reduction_matrix(2), y, frame
        )
        z_wrong = honest.z_hat.copy()
        z_wrong[0] += 1
        corrupted = replace(
            honest,
            z_hat=z_wrong,
            p_hat_full=honest.p_hat_full
            + np.concatenate([sqrt10_spec.prime.embed_DM[0], np.zeros(6)]),
        )
        mocker.patch("src.decoder.pipeline.mi_ml", return_value=corrupted)

        result = full_decode(sqrt10_spec, y, frame, 0.1, truth=point)
        assert not result.stage1_ok
        assert result.stage2_ok
        assert not result.frame_ok

    def test_first_selection_config(self, cubic_spec, rng):
        """Test the first-component rule still decodes noiseless frames"""
        config = DecoderConfig(selection="first")
        msg, z = LatticeTestDataFactory.random_point_args(cubic_spec, rng)
        point = encode(cubic_spec, msg, z)
        frame = fixed_frame([0.6, 1.1, 0.9])
        result = full_decode(
            cubic_spec, transmit(point.x, frame, 0.0, rng), frame, 0.05, config, truth=point
        )
        assert result.frame_ok
        assert result.miml.sel_index.tolist() == [0, 0, 0, 0]

    def test_equalized_search_config(self, sqrt10_spec, cubic_spec, rng):
        """Test the equalized stage-one search still decodes noiseless frames"""
        config = DecoderConfig(prime_search="equalized")
        for spec in (sqrt10_spec, cubic_spec):
            for _ in range(20):
                msg, z = LatticeTestDataFactory.random_point_args(spec, rng)
                point = encode(spec, msg, z)
                frame = fixed_frame(rng.uniform(0.3, 1.5, size=spec.n))
                y = transmit(point.x, frame, 0.0, rng)
                result = full_decode(spec, y, frame, 0.01, config, truth=point)
                assert result.frame_ok

    def test_weak_component_frames(self, cubic_spec, rng):
        """Test the default search decodes a frame with one weak component"""
        frame = fixed_frame([1.0, 0.05, 1.0])
        for _ in range(20):
            msg, z = LatticeTestDataFactory.random_point_args(cubic_spec, rng)
            point = encode(cubic_spec, msg, z)
            y = transmit(point.x, frame, 1e-3, rng)
            result = full_decode(cubic_spec, y, frame, 1e-3, truth=point)
            assert result.stage1_ok
