"""The advice-based decider: exact outcomes, bounds, and the sampled twin."""

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from blindlab.exact import ExactProbability
from blindlab.extract import (
    Advice,
    AllDemoOutcome,
    ExtractionOutcome,
    all_demo,
    extract_decide,
    extract_run_once,
    make_advice,
    random_truth_table,
    extraction_bounds_hold,
)
from blindlab.families import FAMILIES, toy_family
from blindlab.protocol import (
    SCHEMES,
    SchemeContractError,
    fixed_server,
    honest_server,
    padded_honest_server,
)
from blindlab.simulate import EnumerationBudgetError, dqc1_distribution

LEAKY = SCHEMES["leaky"]
CONSTANT = SCHEMES["constant"]
OTP = SCHEMES["otp"]

EP = ExactProbability


def ep(num, den):
    return EP(Fraction(num, den))


# ---------------------------------------------------------------------------
# advice construction


def test_make_advice_leaky_is_all_ones():
    advice = make_advice(LEAKY, honest_server(toy_family), 4, random.Random(0))
    assert advice.a_s == "1111"
    assert advice.s == 4 and advice.key == ""
    # branch 3 of the toy family: acceptance (2 - sqrt 2)/4
    assert advice.law()["1"] == EP(Fraction(1, 2), Fraction(-1, 4))


def test_make_advice_constant_ignores_randomness():
    a1 = make_advice(CONSTANT, honest_server(toy_family), 3, random.Random(1))
    a2 = make_advice(CONSTANT, honest_server(toy_family), 3, random.Random(999))
    assert a1.a_s == a2.a_s == "000"


def test_make_advice_otp_lands_in_support():
    for seed in range(6):
        advice = make_advice(OTP, honest_server(FAMILIES["deg-half"]), 3, random.Random(seed))
        assert len(advice.a_s) == 3 and set(advice.a_s) <= {"0", "1"}
        assert OTP.encrypt("111", advice.key) == advice.a_s


def test_single_and_poly_modes_coincide_on_single_bit_servers():
    server = honest_server(FAMILIES["deg-half"])
    single = make_advice(OTP, server, 3, random.Random(5), mode="single")
    poly = make_advice(OTP, server, 3, random.Random(5), mode="poly")
    assert single.response_model == poly.response_model
    assert single.q0 == poly.q0


def test_single_mode_rejects_wide_servers():
    wide = padded_honest_server(FAMILIES["deg-half"], 2)
    with pytest.raises(SchemeContractError):
        make_advice(OTP, wide, 3, random.Random(0), mode="single")
    advice = make_advice(OTP, wide, 3, random.Random(0), mode="poly")
    assert len(advice.response_model) == 8
    assert advice.q0 == ep(1, 8)  # the all-zeros response


def test_advice_validation():
    with pytest.raises(ValueError):
        Advice(1, "1", (("0", ep(1, 2)),), "", "")  # mass missing
    with pytest.raises(ValueError):
        Advice(1, "1", (("00", ep(1, 2)), ("01", ep(1, 2))), "", "", mode="single")
    with pytest.raises(ValueError):
        make_advice(LEAKY, honest_server(toy_family), 0, random.Random(0))
    with pytest.raises(ValueError):
        make_advice(LEAKY, honest_server(toy_family), 3, random.Random(0), mode="exotic")


def test_make_advice_respects_coin_budget():
    with pytest.raises(EnumerationBudgetError):
        make_advice(OTP, honest_server(FAMILIES["deg-half"]), 25, random.Random(0))


# ---------------------------------------------------------------------------
# the exact decider


def test_leaky_rejects_everything_but_the_advice_instance():
    advice = make_advice(LEAKY, honest_server(toy_family), 4, random.Random(0))
    for v in range(15):  # every x != 1111
        x = format(v, "04b")
        out = extract_decide(LEAKY, advice, x)
        assert out.eta.is_zero() and out.p_acc.is_zero()
        assert out.decision == "reject"
    assert extract_decide(LEAKY, advice, "1111").eta == EP.one()


def test_constant_on_compiled_family_gives_exact_3_over_32():
    server = honest_server(FAMILIES["deg-compiled"])
    advice = make_advice(CONSTANT, server, 4, random.Random(0))
    out = extract_decide(CONSTANT, advice, "0101")
    assert out.eta == EP.one()
    assert out.pr_xi_1 == ep(3, 32)
    assert out.p_acc == ep(3, 32)
    assert out.decision == "accept"


def test_otp_eta_is_uniform_collision_mass():
    advice = make_advice(OTP, honest_server(FAMILIES["deg-half"]), 3, random.Random(3))
    out = extract_decide(OTP, advice, "010")
    assert out.eta == ep(1, 8)
    assert out.pr_xi_1 == ep(1, 2)
    assert out.p_acc == ep(1, 16)


def test_zero_family_rejects():
    server = honest_server(FAMILIES["deg-zero"])
    advice = make_advice(OTP, server, 3, random.Random(1))
    for x in ("000", "101", "111"):
        out = extract_decide(OTP, advice, x)
        assert out.pr_xi_1.is_zero()
        assert out.decision == "reject"


def test_fixed_zero_server_never_accepts():
    advice = make_advice(CONSTANT, fixed_server("z", {"0": 1, "1": 0}), 3, random.Random(0))
    assert extract_decide(CONSTANT, advice, "110").p_acc.is_zero()


def test_outcome_invariant_enforced():
    with pytest.raises(ValueError):
        ExtractionOutcome("1", EP.one(), ep(1, 2), ep(1, 3))


def test_length_mismatch_rejected():
    advice = make_advice(LEAKY, honest_server(toy_family), 3, random.Random(0))
    with pytest.raises(ValueError):
        extract_decide(LEAKY, advice, "11")
    with pytest.raises(ValueError):
        extract_run_once(LEAKY, advice, "11", random.Random(0))


def test_outcome_json_uses_exact_strings():
    advice = make_advice(CONSTANT, honest_server(FAMILIES["deg-compiled"]), 2, random.Random(0))
    d = extract_decide(CONSTANT, advice, "01").to_json_dict()
    assert d["p_acc"] == "(3, 0, 5)"
    assert d["decision"] == "accept"
    assert d["approx"]["p_acc"] == pytest.approx(3 / 32)


# ---------------------------------------------------------------------------
# the squeeze: schemes passing both audits


@pytest.mark.parametrize("scheme", [CONSTANT, OTP])
@pytest.mark.parametrize("family_name", ["deg-half", "deg-compiled", "deg-zero"])
def test_bounds_and_decision_for_blind_correct_pairs(scheme, family_name):
    family = FAMILIES[family_name]
    server = honest_server(family)
    advice = make_advice(scheme, server, 3, random.Random(11))
    for v in range(8):
        x = format(v, "03b")
        out = extract_decide(scheme, advice, x)
        p1 = dqc1_distribution(family(x)).p1
        assert extraction_bounds_hold(out, p1, 0)
        assert out.accept == (p1.sign() > 0)
        # with eps = 0 the squeeze is an equality
        assert out.p_acc == out.eta * p1


def test_bounds_can_fail_for_incorrect_schemes():
    # constant scheme + a lying server on the zero family: p_acc > 0 while
    # p1 = 0, so the squeeze must report a violation
    family = FAMILIES["deg-zero"]
    advice = make_advice(CONSTANT, fixed_server("liar", {"0": Fraction(1, 2), "1": Fraction(1, 2)}), 3, random.Random(0))
    out = extract_decide(CONSTANT, advice, "010")
    p1 = dqc1_distribution(family("010")).p1
    assert not extraction_bounds_hold(out, p1, Fraction(99, 100))
    assert out.accept and p1.is_zero()


# ---------------------------------------------------------------------------
# sampled twin


def test_run_once_matches_exact_probability():
    server = honest_server(FAMILIES["deg-compiled"])
    advice = make_advice(CONSTANT, server, 3, random.Random(0))
    p = 3 / 32
    rng = random.Random(1234)
    n = 30_000
    hits = sum(extract_run_once(CONSTANT, advice, "011", rng) for _ in range(n))
    assert abs(hits / n - p) <= 5 * math.sqrt(p * (1 - p) / n)


def test_run_once_rejects_when_exact_says_zero():
    advice = make_advice(LEAKY, honest_server(toy_family), 3, random.Random(0))
    rng = random.Random(7)
    assert not any(extract_run_once(LEAKY, advice, "010", rng) for _ in range(300))


# ---------------------------------------------------------------------------
# the truth-table demonstrator


def test_parity_table_frozen():
    par = {format(v, "03b"): bin(v).count("1") % 2 for v in range(8)}
    out = all_demo(par, "001")
    assert out.decision == "accept" and out.p_acc == ep(1, 8)
    out = all_demo(par, "000")
    assert out.decision == "reject" and out.p_acc.is_zero()


def test_constant_one_table():
    table = {format(v, "02b"): 1 for v in range(4)}
    for x in table:
        out = all_demo(table, x)
        assert out.accept and out.p_acc == ep(1, 4)


def test_undefined_entries_reject():
    table = {"0": None, "1": 1}
    assert not all_demo(table, "0").accept
    assert all_demo(table, "1").accept


@given(st.integers(0, 100_000), st.integers(1, 6))
@settings(max_examples=40, deadline=None)
def test_all_demo_decides_random_tables_exactly(seed, s):
    table = random_truth_table(s, random.Random(seed))
    for v in range(1 << s):
        x = format(v, f"0{s}b")
        out = all_demo(table, x)
        assert out.accept == (table[x] == 1)
        expected = ep(1, 1 << s) if table[x] == 1 else EP.zero()
        assert out.p_acc == expected


def test_all_demo_validation():
    with pytest.raises(EnumerationBudgetError):
        all_demo({format(v, "017b"): 0 for v in range(1 << 17)}, "0" * 17)
    with pytest.raises(ValueError):
        all_demo({"0": 0}, "1")  # table missing the "1" row
    with pytest.raises(ValueError):
        all_demo({"0": 2, "1": 0}, "0")
    with pytest.raises(ValueError):
        all_demo({"0": 0, "1": 1}, "")
