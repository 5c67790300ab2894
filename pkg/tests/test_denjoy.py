import json
import logging
import math

import numpy as np
import pytest

from denjoy_twist.circle import rotation_order, signed_gap, wrap
from denjoy_twist.denjoy import (
    GapHit,
    GapTable,
    LengthFamily,
    ResidualHit,
    build_table,
    length,
    normalize,
    semiconjugacy,
    twist_gate,
)
from denjoy_twist.errors import ConstructionError

GOLDEN = (math.sqrt(5) - 1) / 2
QUAD = LengthFamily("quadratic", 100.0)


@pytest.fixture(scope="module")
def small_table():
    return build_table(GOLDEN, QUAD, 2000)


def test_length_examples():
    assert length(0, QUAD, 1.0) == 1e-4
    for k in (1, 7, 1000):
        assert length(k, QUAD, 3.0) == length(-k, QUAD, 3.0) > 0


def test_paper_log_length_at_zero():
    # 1 / (100 * (ln 100)^2)
    assert length(0, LengthFamily("paper_log", 100.0, 1.0), 1.0) == pytest.approx(4.7152924252903466e-4, rel=1e-14)


def test_family_validation():
    with pytest.raises(ValueError):
        LengthFamily("cubic")
    with pytest.raises(ValueError):
        LengthFamily("quadratic", C=1.0)
    with pytest.raises(ValueError):
        LengthFamily("paper_log", delta=0.0)


def test_normalizer_against_brute_force_sum():
    k = np.arange(1, 10**7 + 1, dtype=float)
    brute = 1.0 / math.fsum([1e-4, 2.0 * math.fsum((1.0 / (k + 100.0) ** 2).tolist())])
    a_C = normalize(QUAD, 200000)
    assert a_C == pytest.approx(50.0, rel=0.02)
    assert abs(a_C - brute) / brute < 2 * QUAD.tail_majorant(200000) * a_C


def test_normalized_partial_sum_at_most_one():
    a_C = normalize(QUAD, 5000)
    ks = np.arange(-5000, 5001)
    assert math.fsum(length(ks, QUAD, a_C).tolist()) <= 1.0


@pytest.mark.parametrize("fam", [QUAD, LengthFamily("paper_log", 100.0, 1.0)])
def test_normalizer_doubling(fam):
    a1, a2 = normalize(fam, 10000), normalize(fam, 20000)
    assert abs(a2 - a1) < fam.tail_majorant(10000) * a1 * a1


def test_twist_gate_default_value():
    # largest ratio is l_0 / l_-1 = (101/100)^2
    assert twist_gate(QUAD, 200000, 4.375) == pytest.approx(((101 / 100) ** 2 - 1) * 4.375, rel=1e-12)


def test_gate_violation_rejected():
    with pytest.raises(ConstructionError, match="gate"):
        build_table(GOLDEN, LengthFamily("quadratic", 1.5), 100)


def test_table_order_matches_rotation_order(small_table):
    t = small_table
    assert np.array_equal(t.ks, rotation_order(GOLDEN, 2000))
    assert np.all(np.diff(t.starts) > 0)
    assert t.start(0) == 0.0


def test_table_small_n():
    t = build_table(GOLDEN, QUAD, 1)
    assert t.ks.tolist() == [0, -1, 1]
    assert len(t.residual_lengths) == 3 and np.all(t.residual_lengths > 0)


def test_gap_lengths_stored_exactly(small_table):
    t = small_table
    assert np.all(np.abs((t.ends - t.starts) - t.lengths) <= np.spacing(1.0))


def test_mass_and_tail(small_table):
    t = small_table
    assert t.mass_defect() <= 1e-12
    assert t.residual_mass() <= t.tail_bound + 1e-12


def test_locate_examples(small_table):
    t = small_table
    k = 17
    assert t.locate(t.start(k)) == GapHit(k, 0.0)
    hit = t.locate(t.start(k) + t.gap_length(k) / 2)
    assert hit.k == k and hit.u == pytest.approx(t.gap_length(k) / 2, abs=1e-15)
    r = t.rank(k)
    mid = 0.5 * (t.ends[r] + t.next_starts[r])
    hit = t.locate(mid)
    assert isinstance(hit, ResidualHit) and hit.left_rank == r
    assert hit.s == pytest.approx(0.5, abs=1e-9)


def test_locate_round_trip(small_table):
    t = small_table
    rng = np.random.default_rng(3)
    for k, f in zip(rng.integers(-2000, 2001, 1000).tolist(), rng.uniform(0, 1, 1000).tolist()):
        u = f * float(t.gap_length(k))
        hit = t.locate(t.start(k) + u)
        assert hit.k == k and abs(hit.u - u) <= 1e-15


def test_semiconjugacy_examples(small_table):
    t = small_table
    assert semiconjugacy(t.start(0) + 1e-6, t) == 0.0
    x5 = t.start(5) + 0.3 * float(t.gap_length(5))
    assert abs(signed_gap(semiconjugacy(x5, t), wrap(5 * GOLDEN))) < 1e-15


def test_semiconjugacy_monotone(small_table):
    x = np.sort(np.random.default_rng(5).uniform(0, 1, 10**4))
    j = semiconjugacy(x, small_table)
    assert np.sum(np.diff(j) < 0) <= 1


def test_slope_one_off_gaps(default_build):
    # the carry chain makes every complementary arc map with slope exactly 1
    dev = np.abs(default_build.g.arc_slopes() - 1.0)
    assert dev.max() < 1e-6


def test_json_round_trip(small_table):
    d = json.loads(json.dumps(small_table.to_dict()))
    t2 = GapTable.from_dict(d)
    assert json.dumps(t2.to_dict()) == json.dumps(small_table.to_dict())
    assert set(d["gaps"][0]) == {"k", "rank", "a", "len"}


def test_paper_log_warns(caplog):
    with caplog.at_level(logging.WARNING):
        t = build_table(GOLDEN, LengthFamily("paper_log", 100.0, 1.0), 2000)
    assert "paper_log" in caplog.text
    assert t.tail_bound > 0.1
