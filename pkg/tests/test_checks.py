import json
import math
from fractions import Fraction

import pytest

from permlab.checks import (
    check_alon,
    check_growth_rate,
    check_littlewood_offord,
    check_maintain_grow_events,
    check_many_children,
    check_parent_child,
    check_second_moment,
    check_singularity,
    suite_passed,
    summary_lines,
)
from permlab.growth import ProcessConfig
from permlab.matrices import CapError, all_ones
from permlab.rng import RngStream

from oracles import brute_max_interval_count, brute_signed_sums


def test_second_moment_exact_small():
    r2 = check_second_moment(2, mode="exact")
    assert r2.passed and r2.statistics["mean_per_squared"] == "2"
    r3 = check_second_moment(3, mode="exact")
    assert r3.passed and r3.statistics["mean_per_squared"] == "6"
    assert r3.statistics["sum_per_squared"] == 6 * 512


def test_second_moment_exact_cap():
    with pytest.raises(CapError):
        check_second_moment(5, mode="exact")


def test_second_moment_monte_carlo():
    r = check_second_moment(6, mode="monte_carlo", trials=400, rng=RngStream(3))
    assert r.passed
    assert r.sample_size == 400


def test_alon_n3_exact_passes():
    r = check_alon(3)
    assert r.passed
    assert r.statistics["checked"] == 512
    assert r.statistics["mismatches"] == 0
    assert r.statistics["two_adic_mismatches"] == 0


def test_alon_stated_residue_refuted_at_7():
    # The stated fixed residue (n+1)/2 mod n+1 is mathematically false for
    # n = 7: the all-ones matrix has permanent 5040 = 0 mod 8.  The check
    # must report the refutation honestly, while the corrected two-adic
    # congruence holds on every draw.
    r = check_alon(7, trials=50, rng=RngStream(4, 7))
    assert not r.passed
    assert r.statistics["mismatches"] == 50
    assert r.statistics["two_adic_mismatches"] == 0
    assert r.statistics["two_adic_modulus"] == 32
    assert r.statistics["two_adic_reference"] == 16
    assert r.notes


def test_alon_rejects_bad_n():
    with pytest.raises(ValueError):
        check_alon(5)


def test_alon_31_exceeds_engine_cap():
    # n+1 = 32 is admissible in principle but needs 2**31 subset terms,
    # beyond the modular engine's documented cap
    with pytest.raises(CapError):
        check_alon(31, trials=1, rng=RngStream(0))


def test_many_children_all_ones_instance():
    # deterministic instance: all-ones children always outweigh the parent
    import numpy as np
    from permlab.engines import ryser_batch

    k, i_size = 6, 3
    mats = np.ones((1, k + 1, k + i_size), dtype=np.int64)
    parent = abs(int(ryser_batch(mats[:, :k, :k])[0]))
    for i in range(i_size):
        child = np.concatenate([mats[:, :, :k], mats[:, :, k + i : k + i + 1]], axis=2)
        assert abs(int(ryser_batch(child)[0])) >= parent


def test_singularity_exact():
    r2 = check_singularity(2, mode="exact")
    assert r2.passed and r2.statistics["probability"] == "1/2"
    r3 = check_singularity(3, mode="exact")
    assert r3.passed and r3.statistics["zero_count"] == 0
    r4 = check_singularity(4, mode="exact")
    assert r4.passed and r4.statistics["zero_count"] == 21504


def test_parent_child_deterministic_and_statistical():
    r = check_parent_child(2000, 8, rng=RngStream(5))
    assert r.passed
    assert r.statistics["flip_identity_violations"] == 0
    assert r.statistics["max_over_sign_violations"] == 0
    assert r.statistics["child_at_least_parent_frequency"] >= 0.5 - 3 * r.statistics["se"]


def test_many_children_bound():
    r = check_many_children(2000, 12, 4, rng=RngStream(6))
    assert r.passed
    assert r.statistics["some_child_frequency"] >= 1 - 2**-4 - 3 * r.statistics["se"]
    # the one-candidate case reduces to the single-child bound of 1/2
    r1 = check_many_children(2000, 12, 1, rng=RngStream(6, 1))
    assert r1.passed


def test_littlewood_offord_hand_cases():
    # v=(1,1): P(sum=0) = 1/2 and the binomial bound is tight
    r = check_littlewood_offord([1.0, 1.0], 1.0, x=0.0, mode="exact")
    assert r.passed
    assert r.statistics["max_interval_probability"] == 0.5
    assert Fraction(1, 2) == r.statistics["max_interval_probability_exact"]
    # v=(1,1,1): max open-length-2 window holds three of eight sums (bound tight),
    # and P(|sum| <= 1) = 6/8 meets the two-window tail bound exactly
    r3 = check_littlewood_offord([1.0, 1.0, 1.0], 1.0, x=1.0, mode="exact")
    assert r3.passed
    assert r3.statistics["max_interval_probability_exact"] == Fraction(3, 8)
    assert r3.statistics["tail_probability_exact"] == Fraction(6, 8)
    assert r3.to_dict()["bound"]["tail"] == pytest.approx(6 / 8)


def test_littlewood_offord_against_brute():
    vecs = [[1.0, 2.0, 1.0, 3.0], [1.5, 1.5, 2.5], [1.0] * 6]
    for v in vecs:
        r = check_littlewood_offord(v, 1.0, x=2.0, mode="exact")
        sums = brute_signed_sums(v)
        max_count = brute_max_interval_count(sums, 2.0)
        assert r.statistics["max_interval_probability_exact"] == Fraction(max_count, 2 ** len(v))
        tail = sum(1 for s in sums if abs(s) <= 2.0)
        assert r.statistics["tail_probability_exact"] == Fraction(tail, 2 ** len(v))
        assert r.passed


def test_littlewood_offord_partial_heavy_support():
    # only two coordinates reach the threshold; the bound uses those two
    r = check_littlewood_offord([1.0, 1.0, 0.25], 1.0, x=1.0, mode="exact")
    assert r.statistics["k_heavy"] == 2
    assert r.passed


def test_littlewood_offord_monte_carlo():
    r = check_littlewood_offord([1.0] * 24, 1.0, x=1.0, mode="monte_carlo",
                                trials=5000, rng=RngStream(8))
    assert r.passed


def test_littlewood_offord_validation():
    with pytest.raises(ValueError):
        check_littlewood_offord([0.5, 0.2], 1.0)  # nothing reaches the threshold
    with pytest.raises(ValueError):
        check_littlewood_offord([1.0], 0.0)
    with pytest.raises(CapError):
        check_littlewood_offord([1.0] * 21, 1.0, mode="exact")


def test_growth_rate_descriptive_without_band():
    r = check_growth_rate([8], 50, rng=RngStream(9))
    assert r.descriptive
    assert r.passed
    stats = r.statistics["per_n"]["8"]
    assert stats["zero_count"] + round(stats["nonzero_fraction"] * 50) == 50


def test_maintain_grow_events_small():
    r = check_maintain_grow_events(12, 40, cfg=ProcessConfig(eps=0.3, c=0.5),
                                   rng=RngStream(10))
    freqs = r.statistics["conditional_frequencies"]
    cond = r.statistics["conditioning_events"]
    assert cond["keep"] > 0
    assert cond["explode"] + cond["grow"] == cond["keep"]
    if cond["explode"] >= 500:
        assert not r.descriptive
    else:
        assert r.descriptive
    assert not math.isnan(freqs["keep"])


def test_report_serialization():
    r = check_second_moment(2, mode="exact")
    blob = json.loads(r.to_json())
    assert blob["name"] == "second_moment"
    assert blob["passed"] is True
    assert blob["tolerance"] == "exact"


def test_suite_exit_logic():
    r_pass = check_second_moment(2, mode="exact")
    r_desc = check_growth_rate([8], 10, rng=RngStream(11))
    assert suite_passed([r_pass, r_desc])
    r_fail = check_alon(7, trials=5, rng=RngStream(12))
    assert not suite_passed([r_pass, r_fail])
    lines = summary_lines([r_pass, r_desc, r_fail])
    assert lines[0].startswith("PASS") and lines[1].startswith("DESC") and lines[2].startswith("FAIL")


def test_all_ones_maintain_event_deterministic():
    # on the all-ones matrix every minor is heavy, so the keep event always fires
    r = check_maintain_grow_events(10, 1, cfg=ProcessConfig(), rng=RngStream(13))
    # run manually on all-ones to pin the deterministic instance
    from permlab.growth import run_growth, count_threshold

    trace = run_growth(all_ones(10), ProcessConfig(), keep_table=True)
    table = trace.table
    for rec in trace.records[:-1]:
        if rec.step_type is None:
            continue
        assert table.heavy_count(rec.k + 1, rec.threshold) >= count_threshold(
            ProcessConfig().eps * rec.tracked / 6
        )
