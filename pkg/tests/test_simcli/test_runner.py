"""
Tests for config validation and experiment dispatch
"""

import json

import pytest
from freezegun import freeze_time

from src.analysis.csvio import header_lines, read_rows
from src.common.errors import ConstructionError, InvalidInput
from src.common.models import RunConfig
from src.simcli.runner import (
    build_lattice,
    csv_header,
    default_output,
    load_config,
    run,
    summary_line,
    validate,
)
from tests.fixtures.test_data import ConfigTestDataFactory, CurveTestDataFactory


class TestValidate:
    """Test configuration diagnostics"""

    def test_valid(self, run_config):
        """Test a complete build-check config"""
        assert validate(run_config) == []

    def test_unusable_quadratic(self):
        """Test m = 5 mod 8 is reported against the field"""
        diagnostics = validate(ConfigTestDataFactory.run_config(field={"kind": "quadratic", "m": 5}))
        assert len(diagnostics) == 1
        assert diagnostics[0].startswith("field:")
        assert "unusable" in diagnostics[0]

    def test_no_linear_factor(self):
        """Test fields whose minpoly has no root mod 2"""
        config = ConfigTestDataFactory.run_config(field={"kind": "poly", "coeffs": [-1, -1, 1]})
        assert validate(config) == ["field: x**2 - x - 1 has no linear factor mod 2"]

    def test_wrong_prime_root(self):
        """Test x + 1 does not divide x^2 - 10 mod 2"""
        diagnostics = validate(ConfigTestDataFactory.run_config(prime_root=1))
        assert len(diagnostics) == 1
        assert diagnostics[0].startswith("prime_root:")

    def test_zero_workers(self):
        """Test schema errors carry their location"""
        diagnostics = validate(ConfigTestDataFactory.run_config(workers=0))
        assert len(diagnostics) == 1
        assert diagnostics[0].startswith("workers:")

    def test_regular_code_checks(self):
        """Test divisibility of N*wc by wr"""
        config = ConfigTestDataFactory.run_config(
            code={"regular": {"N": 10, "wc": 3, "wr": 4}}
        )
        assert validate(config) == [
            "code.regular: N*wc = 30 is not divisible by wr = 4"
        ]

    def test_missing_alist(self, temp_dir):
        """Test alist paths resolve against the config directory"""
        config = ConfigTestDataFactory.run_config(code={"alist": "missing.alist"})
        diagnostics = validate(config, base_dir=temp_dir)
        assert diagnostics == [f"code.alist: file not found: {temp_dir / 'missing.alist'}"]

    def test_simulation_needs_seed_and_grid(self):
        """Test fer runs need an SNR point and a seed"""
        config = ConfigTestDataFactory.run_config(kind="fer", channel={"rho_db": []})
        diagnostics = validate(config)
        assert any(d.startswith("channel.rho_db:") for d in diagnostics)
        assert any(d.startswith("seed:") for d in diagnostics)

    def test_deep_fade_box_covers_z_box(self):
        """Test fer runs reject a deep-fade search box smaller than the z range"""
        config = ConfigTestDataFactory.run_config(
            kind="fer", seed=1, z_box=3, decoder={"deep_fade_box": 2}
        )
        diagnostics = validate(config)
        assert len(diagnostics) == 1
        assert diagnostics[0].startswith("decoder.deep_fade_box: 2 is smaller than z_box = 3")

    def test_deep_fade_box_ignored_for_bounds(self):
        """Test bound runs do not decode and accept any box"""
        config = ConfigTestDataFactory.run_config(
            kind="outage", seed=1, z_box=3, decoder={"deep_fade_box": 2}
        )
        assert validate(config) == []

    def test_accepts_model(self, run_config):
        """Test validated models are accepted as-is"""
        assert validate(RunConfig.model_validate(run_config)) == []

    def test_collects_several_problems(self):
        """Test every problem is reported, not just the first"""
        config = ConfigTestDataFactory.run_config(
            kind="outage",
            field={"kind": "quadratic", "m": 13},
            code={"regular": {"N": 10, "wc": 3, "wr": 4}},
        )
        assert len(validate(config)) == 3


class TestLoadConfig:
    """Test reading configs with command-line overrides"""

    def test_overrides(self, config_file):
        """Test None overrides are skipped and rho_db goes into the channel"""
        raw = load_config(config_file, {"seed": 5, "workers": None, "rho_db": [1.0, 2.0]})
        assert raw["seed"] == 5
        assert "workers" not in raw
        assert raw["channel"]["rho_db"] == [1.0, 2.0]
        assert raw["channel"]["nakagami_m"] == 1.0

    def test_invalid_json(self, temp_dir):
        """Test unparsable files"""
        path = temp_dir / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(InvalidInput):
            load_config(path)

    def test_not_an_object(self, temp_dir):
        """Test top-level arrays"""
        path = temp_dir / "list.json"
        path.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(InvalidInput):
            load_config(path)


class TestBuildLattice:
    """Test building lattices from configs"""

    def test_example(self, run_config):
        """Test the square-root-10 example config"""
        spec = build_lattice(RunConfig.model_validate(run_config))
        assert (spec.n, spec.N, spec.k) == (2, 4, 1)
        assert spec.prime.gen_linear_root == 0
        assert spec.descriptor["code"] == {"builtin": "example-3x4"}


class TestRun:
    """Test experiment dispatch"""

    def test_build_check_report(self, run_config):
        """Test the build-check lines for the square-root-10 example"""
        lines = []
        result = run(RunConfig.model_validate(run_config), lines.append)
        assert result.csv_text is None
        assert lines[0] == "field: x**2 - 10  d_K = 40"
        assert "disc = 163,840,000" in lines
        assert "det(2 Lambda) = 3.276800e+06" in lines
        assert lines[-1] == "parity identity OK"

    def test_build_check_huge_discriminant(self):
        """Test discriminants beyond 512 bits are reported as a power of two"""
        config = ConfigTestDataFactory.run_config(
            field={"kind": "cubic-example"}, code={"regular": {"N": 100, "wc": 3, "wr": 6}}
        )
        lines = []
        run(RunConfig.model_validate(config), lines.append)
        assert any(line.startswith("disc = 2^") for line in lines)
        assert lines[-1] == "parity identity OK"

    def test_build_check_failure(self, run_config, mocker):
        """Test a generator row failing membership aborts the check"""
        mocker.patch("src.simcli.runner.membership", return_value=False)
        with pytest.raises(ConstructionError):
            run(RunConfig.model_validate(run_config), lambda line: None)

    def test_outage_run(self):
        """Test an outage run renders one CSV row per SNR point"""
        config = ConfigTestDataFactory.run_config(kind="outage", seed=11, workers=1)
        lines = []
        result = run(RunConfig.model_validate(config), lines.append)
        rows = read_rows(result.csv_text)
        assert [row["rho_db"] for row in rows] == ["10.000000", "20.000000", "30.000000"]
        assert all(row["trials"] == "2000" for row in rows)
        assert len(lines) == 3
        assert header_lines(result.csv_text)[0].startswith("divlat ")

    def test_fer_run_reproducible(self):
        """Test equal configs give byte-identical CSV rows"""
        config = RunConfig.model_validate(
            ConfigTestDataFactory.run_config(
                kind="fer", seed=3, workers=1, trials=40, batch_size=20, channel={"rho_db": [5.0, 15.0]}
            )
        )
        first = run(config, lambda line: None)
        second = run(config, lambda line: None)
        assert read_rows(first.csv_text) == read_rows(second.csv_text)
        assert [row["trials"] for row in read_rows(first.csv_text)] == ["40", "40"]

    def test_missing_seed(self, run_config):
        """Test simulations refuse to run without a seed"""
        config = RunConfig.model_validate({**run_config, "kind": "slb"})
        with pytest.raises(InvalidInput):
            run(config, lambda line: None)


class TestProvenance:
    """Test output naming and CSV headers"""

    def test_default_output(self, run_config):
        """Test the default path names kind, field and spec hash"""
        config = RunConfig.model_validate({**run_config, "kind": "fer"})
        path = default_output(config)
        assert path.parent.name == "results"
        assert path.name == f"fer-quadratic-10-{config.spec_hash()[:8]}.csv"

    @freeze_time("2024-01-15T12:00:00Z")
    def test_csv_header(self, run_config):
        """Test header keys, the embedded config and the frozen timestamp"""
        config = RunConfig.model_validate({**run_config, "kind": "fer", "seed": 4, "output": "x.csv"})
        curve = CurveTestDataFactory.power_law(1.0, 2.0, [10.0])
        header = csv_header(config, curve)
        assert list(header) == ["spec_hash", "seed", "workers", "rng", "config", "generated"]
        assert header["generated"] == "2024-01-15T12:00:00Z"
        embedded = json.loads(header["config"])
        assert embedded["seed"] == 4
        assert "output" not in embedded

    def test_summary_line(self):
        """Test the progress line"""
        point = CurveTestDataFactory.power_law(1.0, 2.0, [10.0]).points[0]
        line = summary_line(point)
        assert line.startswith("rho =   10.00 dB")
        assert "errors =  10000" in line
        assert "bp =      0" in line
