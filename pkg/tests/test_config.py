"""Config parsing, presets, and translation into model/objective settings."""

import numpy as np
import pytest

from platedamage import natural_frequencies
from platedamage.config import (
    CASE_PRESETS,
    ConfigError,
    RunConfig,
    measurement_layout,
    model_from_config,
    noise_from_config,
    notch_from_config,
    objective_from_config,
    omegas_from_config,
    parse_config_file,
    settings_from_config,
)


def write_config(tmp_path, text):
    path = tmp_path / "run.cfg"
    path.write_text(text)
    return path


class TestParsing:
    def test_empty_file_gives_the_defaults(self, tmp_path):
        path = write_config(tmp_path, "# nothing but a comment\n\n")
        assert parse_config_file(path) == RunConfig()

    def test_values_comments_and_lists(self, tmp_path):
        path = write_config(
            tmp_path,
            """
            length_x = 0.4          # inline comment
            measurement_nx = 3
            frequencies_hz = 100, 200.5, 300
            measurement_points = 0.02:0.012; 0.04:0.028
            objective = J1
            dataset = measured.csv
            """,
        )
        config = parse_config_file(path)
        assert config.length_x == 0.4
        assert config.measurement_nx == 3
        assert config.frequencies_hz == (100.0, 200.5, 300.0)
        assert config.measurement_points == ((0.02, 0.012), (0.04, 0.028))
        assert config.objective == "J1"
        assert config.dataset == "measured.csv"

    def test_unknown_key_reports_the_line(self, tmp_path):
        path = write_config(tmp_path, "length_x = 0.4\nbogus = 1\n")
        with pytest.raises(ConfigError, match=r"line 2.*bogus"):
            parse_config_file(path)

    def test_bad_value_reports_the_line(self, tmp_path):
        path = write_config(tmp_path, "\nelem_size = fast\n")
        with pytest.raises(ConfigError, match="line 2"):
            parse_config_file(path)

    def test_missing_equals_sign(self, tmp_path):
        path = write_config(tmp_path, "elem_size\n")
        with pytest.raises(ConfigError, match="key = value"):
            parse_config_file(path)


class TestCasePresets:
    def test_known_cases_cover_both_plates(self):
        assert set(CASE_PRESETS) == {"A1", "A2", "B1", "B2"}
        assert CASE_PRESETS["A1"]["length_x"] == 0.635
        assert CASE_PRESETS["B2"]["frequencies_hz"] == (260.0, 804.0, 900.0)

    def test_preset_applies_before_any_override(self, tmp_path):
        # the override wins even when it appears before the case line
        path = write_config(tmp_path, "length_x = 0.4\ncase = b2\n")
        config = parse_config_file(path)
        assert config.case == "B2"
        assert config.length_x == 0.4
        assert config.rayleigh_alpha == 1.94
        assert config.frequencies_hz == (260.0, 804.0, 900.0)

    def test_unknown_case_rejected(self, tmp_path):
        path = write_config(tmp_path, "case = C9\n")
        with pytest.raises(ConfigError, match="unknown case"):
            parse_config_file(path)


class TestValidation:
    def test_frequencies_must_be_positive_and_increasing(self, tmp_path):
        with pytest.raises(ConfigError, match="increasing"):
            parse_config_file(write_config(tmp_path, "frequencies_hz = 200, 100\n"))
        with pytest.raises(ConfigError, match="at least one frequency"):
            parse_config_file(write_config(tmp_path, "frequencies_hz =\n"))

    def test_objective_and_weight_are_checked(self, tmp_path):
        with pytest.raises(ConfigError, match="objective"):
            parse_config_file(write_config(tmp_path, "objective = l3\n"))
        with pytest.raises(ConfigError, match="nonnegative"):
            parse_config_file(write_config(tmp_path, "lasso_weight = -0.5\n"))


class TestTranslation:
    def test_objective_aliases(self):
        for name, kind in (("j1", "mse"), ("J2", "mac"), ("mse", "mse"), ("mac", "mac")):
            config = RunConfig()
            config.objective = name
            assert objective_from_config(config).kind == kind

    def test_default_measurement_grid(self):
        config = RunConfig()  # wide-plate defaults: 6 x 4 grid inset 25 mm
        points = measurement_layout(config)
        assert len(points) == 24
        assert points[0] == pytest.approx((0.025, 0.025))
        assert points[-1] == pytest.approx((0.310, 0.075))
        xs = sorted({p[0] for p in points})
        assert len(xs) == 6
        assert np.allclose(np.diff(xs), xs[1] - xs[0])

    def test_explicit_points_win_over_grid(self):
        config = RunConfig()
        config.measurement_points = ((0.1, 0.05),)
        assert measurement_layout(config) == ((0.1, 0.05),)

    def test_model_matches_the_preset_discretization(self):
        config = RunConfig(**CASE_PRESETS["B2"])
        model = model_from_config(config)
        assert (model.mesh.nx, model.mesh.ny) == (34, 10)
        assert model.n_measurements == 24

    def test_builder_helpers_map_fields(self):
        config = RunConfig()
        config.notch_x, config.notch_width = 0.2, 0.03
        notch = notch_from_config(config)
        assert notch.x0 == 0.2 and notch.width == 0.03

        config.noise_rel, config.seed = 0.02, 7
        noise = noise_from_config(config)
        assert noise.rel == 0.02 and noise.seed == 7

        config.max_iterations, config.q_patience = 17, 3
        settings = settings_from_config(config)
        assert settings.max_iterations == 17 and settings.q_patience == 3

        assert np.allclose(
            omegas_from_config(config),
            2.0 * np.pi * np.asarray(config.frequencies_hz),
        )

    def test_calibration_rescales_the_modulus(self):
        config = RunConfig(
            length_x=0.08,
            length_y=0.04,
            elem_size=0.02,
            excitation_x=0.07,
            excitation_y=0.03,
            measurement_points=((0.04, 0.02),),
            calibrate_f1_hz=700.0,
        )
        model = model_from_config(config)
        assert model.material.youngs_modulus != 72.5e9
        f1 = natural_frequencies(model, n_modes=1)[0]
        assert f1 == pytest.approx(700.0, rel=1e-9)
