from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from silverline.config import RunConfig


def test_defaults():
    cfg = RunConfig()
    assert cfg.precision_width == Fraction(1, 10**20)
    assert cfg.degree_bounds["dichotomy"] == 10
    assert cfg.output_format == "text"


def test_parse_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# comment\n"
        "precision_width = 1/1000\n"
        "digits = 8\n"
        "tile_counts = 200\n"
        "output_format = json\n"
        "degree_bound.dichotomy = 6  # inline comment\n"
    )
    cfg = RunConfig.load(path)
    assert cfg.precision_width == Fraction(1, 1000)
    assert cfg.digits == 8 and cfg.tile_counts == 200
    assert cfg.output_format == "json"
    assert cfg.degree_bounds == {"dichotomy": 6, "scan": 10}


@pytest.mark.parametrize(
    "text",
    ["precision_width = 0", "degree_bound.scan = 0", "output_format = xml", "tile_counts = 0", "colour = red", "digits"],
)
def test_invalid(text):
    with pytest.raises(ValueError):
        RunConfig.from_text(text)


def test_flags_win():
    cfg = RunConfig.from_text("digits = 8\ndegree_bound.dichotomy = 6")
    out = cfg.override(digits=20, output_format=None, **{"degree_bound.dichotomy": 4})
    assert out.digits == 20
    assert out.output_format == "text"
    assert out.degree_bounds["dichotomy"] == 4
    assert cfg.digits == 8  # original untouched


@given(st.integers(1, 40), st.integers(1, 10**6), st.sampled_from(["json", "csv", "text"]))
def test_round_trip_through_text(digits, tiles, fmt):
    text = f"digits = {digits}\ntile_counts = {tiles}\noutput_format = {fmt}\n"
    cfg = RunConfig.from_text(text)
    assert (cfg.digits, cfg.tile_counts, cfg.output_format) == (digits, tiles, fmt)
