import math

import pytest

from denjoy_twist.config import BuildConfig, load_config, parse_config_text
from denjoy_twist.errors import ConstructionError


def test_defaults():
    c = BuildConfig()
    assert c.alpha == (math.sqrt(5) - 1) / 2
    assert (c.family, c.C, c.delta, c.N, c.bump_p) == ("quadratic", 100.0, 1.0, 200000, 3)
    assert (c.x0_fraction, c.K_orbit, c.dL, c.dR, c.fL, c.rng_seed) == (0.5, 300, 0.2, 0.1, 0.9, 1)
    assert c.violations() == []


def test_parse_text():
    text = "# comment\nN = 5000   # trailing\n\nfamily=paper_log\nalpha = 0.4142135623730951\n"
    assert parse_config_text(text) == {"N": 5000, "family": "paper_log", "alpha": 0.4142135623730951}


@pytest.mark.parametrize("text, msg", [
    ("bogus = 1", "unknown key"),
    ("N = many", "bad value"),
    ("just words", "key = value"),
])
def test_parse_errors(text, msg):
    with pytest.raises(ConstructionError, match=msg):
        parse_config_text(text)


def test_every_violation_listed():
    c = BuildConfig(alpha=1.5, family="cubic", N=4, x0_fraction=0.0, dL=0.1, dR=0.1, fL=2.0)
    keys = {v.split(":")[0] for v in c.violations()}
    assert {"alpha", "family", "N", "x0_fraction", "dL, dR", "fL"} <= keys


def test_equal_offsets_message():
    with pytest.raises(ConstructionError, match="beta_0\\^R != beta_0\\^L violated"):
        BuildConfig(dL=0.1, dR=0.1).validate()


def test_gate_value_reported():
    with pytest.raises(ConstructionError) as e:
        BuildConfig(C=1.0).validate()
    assert "twist gate" in str(e.value) and "13.125" in str(e.value)


def test_load_with_overrides(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("N = 3000\nK_orbit = 50\nrng_seed = 4\n")
    c = load_config(p, {"rng_seed": 9, "dL": None})
    assert (c.N, c.K_orbit, c.rng_seed, c.dL) == (3000, 50, 9, 0.2)
