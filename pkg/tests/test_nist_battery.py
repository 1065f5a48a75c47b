from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rc4pkrs import generate
from rc4pkrs.errors import ConfigError
from rc4pkrs.nist_sts import (
    BIT_ORDER,
    P_VALUE_COUNTS,
    BitSequence,
    TestParams,
    aperiodic_templates,
    as_bits,
    gf2_rank,
    linear_complexity,
    run_all,
    t01_monobit,
    t02_block_frequency,
    t03_runs,
    t04_longest_run,
    t05_matrix_rank,
    t06_dft,
    t07_nonoverlapping_template,
    t08_overlapping_template,
    t09_universal,
    t10_linear_complexity,
    t11_serial,
    t12_approx_entropy,
    t13_cusum,
    t14_random_excursions,
    t15_excursions_variant,
)
from rc4pkrs.nist_sts.battery import rank_probabilities

import reference_sts as ref

PI_100 = ("1100100100001111110110101010001000100001011010001100001000110100110001"
          "001100011001100010100010111000")
LONGEST_128 = ("11001100000101010110110001001100111000000000001001001101010100010001"
               "001111010110100000001101011111001100111001101101100010110010")


def p(res, k=0):
    return res.p_values[k]


# --------------------------------------------------------------------------
# small hand-checkable inputs
# --------------------------------------------------------------------------

def test_monobit_small():
    assert p(t01_monobit("1011010101")) == pytest.approx(0.5270893, abs=1e-7)
    assert p(t01_monobit(PI_100)) == pytest.approx(0.109599, abs=1e-6)


def test_block_frequency_small():
    r = t02_block_frequency("0110011010", 3)
    assert r.stats["chi2"] == pytest.approx(1.0)
    assert p(r) == pytest.approx(0.8012520, abs=1e-7)
    assert p(t02_block_frequency(PI_100, 10)) == pytest.approx(0.706438, abs=1e-6)


def test_runs_small():
    assert p(t03_runs("1001101011")) == pytest.approx(0.1472323, abs=1e-7)
    assert p(t03_runs(PI_100)) == pytest.approx(0.500798, abs=1e-6)


def test_runs_prerequisite_failure():
    r = t03_runs("1" * 90 + "0" * 10)
    assert p(r) == 0.0 and not r.valid


def test_longest_run_small():
    r = t04_longest_run(LONGEST_128)
    assert r.stats["M"] == 8
    assert r.stats["nu"] == [4, 9, 3, 0]
    assert r.stats["chi2"] == pytest.approx(4.882605, abs=1e-6)
    assert p(r) == pytest.approx(0.1805980, abs=1e-7)


def test_rank_small():
    r = t05_matrix_rank("01011001001010101101", 3, 3)
    assert r.stats["counts"] == [1, 1, 0]
    assert p(r) == pytest.approx(0.8209616, abs=1e-7)


def test_dft_small():
    r = t06_dft("1001010011")
    assert r.stats["N1"] == 5
    assert p(r) == pytest.approx(0.4681599, abs=1e-7)


def test_nonoverlapping_small():
    r = t07_nonoverlapping_template("10100100101110010110", 3, "001", 2)
    assert r.stats["W"] == [2, 1]
    assert r.stats["chi2"] == pytest.approx(2.133333, abs=1e-6)
    assert p(r) == pytest.approx(0.3441538, abs=1e-7)


def test_universal_small():
    r = t09_universal("01011010011101010111", 2, 4)
    assert r.stats["fn"] == pytest.approx(1.1949875, abs=1e-7)
    assert p(r) == pytest.approx(0.0634535, abs=1e-7)


@pytest.mark.parametrize("bits, L", [
    ("1101011110001", 4), ("0" * 20, 0), ("01" * 20, 2), ("0" * 70 + "1", 71), ("1", 1),
])
def test_linear_complexity_known(bits, L):
    assert linear_complexity(bits) == L


def test_serial_small():
    r = t11_serial("0011011101", 3)
    assert r.p_values == pytest.approx((0.8087921, 0.6703200), abs=1e-7)
    assert not r.valid


def test_approximate_entropy_small():
    assert p(t12_approx_entropy("0100110101", 3)) == pytest.approx(0.2619611, abs=1e-7)


def test_cusum_small():
    assert t13_cusum("1011010111").p_values == pytest.approx((0.4115847,) * 2, abs=1e-7)
    assert t13_cusum(PI_100).p_values == pytest.approx((0.219194, 0.114866), abs=1e-6)


def test_excursions_small():
    r14 = t14_random_excursions("0110110101")
    assert r14.stats["J"] == 3
    assert p(r14, 4) == pytest.approx(0.5024875, abs=1e-7)
    assert not r14.valid
    r15 = t15_excursions_variant("0110110101")
    assert r15.stats["xi"][9] == 4
    assert p(r15, 9) == pytest.approx(0.6830914, abs=1e-7)


# --------------------------------------------------------------------------
# published results for the first 10**6 bits of e
# --------------------------------------------------------------------------

@pytest.fixture(scope="module")
def e_seq(e_bits):
    return BitSequence.from_text(e_bits)


def test_e_expansion_prefix(e_bits):
    assert e_bits.startswith("10101101111110000101")


@pytest.mark.parametrize("fn, kwargs, k, expected", [
    (t01_monobit, {}, 0, 0.953749),
    (t02_block_frequency, {"M": 128}, 0, 0.211072),
    (t03_runs, {}, 0, 0.561917),
    (t04_longest_run, {}, 0, 0.718945),
    (t05_matrix_rank, {}, 0, 0.306156),
    (t06_dft, {}, 0, 0.847187),
    (t07_nonoverlapping_template, {"m": 9, "templates": "000000001"}, 0, 0.078790),
    (t08_overlapping_template, {}, 0, 0.110434),
    (t09_universal, {}, 0, 0.282568),
    (t10_linear_complexity, {"M": 1000}, 0, 0.845406),
    (t11_serial, {"m": 16}, 0, 0.766182),
    (t11_serial, {"m": 16}, 1, 0.462921),
    (t12_approx_entropy, {"m": 10}, 0, 0.700073),
    (t13_cusum, {}, 0, 0.669886),
    (t13_cusum, {}, 1, 0.724265),
    (t14_random_excursions, {}, 4, 0.786868),
    (t15_excursions_variant, {}, 8, 0.826009),
], ids=lambda v: getattr(v, "__name__", None))
def test_published_e_expansion_results(e_seq, fn, kwargs, k, expected):
    assert fn(e_seq, **kwargs).p_values[k] == pytest.approx(expected, abs=1e-6)


def test_e_expansion_cycle_count(e_seq):
    assert t14_random_excursions(e_seq).stats["J"] == 1490


# --------------------------------------------------------------------------
# building blocks against the reference suite
# --------------------------------------------------------------------------

def test_aperiodic_templates():
    t9 = aperiodic_templates(9)
    assert len(t9) == 148
    assert t9[0] == "000000001"
    assert list(t9) == ref.templates(9)
    assert [len(aperiodic_templates(m)) for m in (2, 3, 4, 5)] == [2, 4, 6, 12]


def test_rank_probabilities_match_exact_fractions():
    for M, Q in ((32, 32), (3, 3), (6, 8)):
        exact = ref.rank_probs_exact(M, Q)
        assert rank_probabilities(M, Q) == pytest.approx([float(x) for x in exact], abs=1e-15)
    # a random 3x3 matrix over GF(2) is invertible with probability 7/8 * 3/4 * 1/2
    assert ref.rank_probs_exact(3, 3)[0] == Fraction(21, 64)


@settings(max_examples=200, deadline=None)
@given(rows=st.lists(st.integers(0, 2 ** 20 - 1), min_size=1, max_size=24))
def test_gf2_rank_property(rows):
    mat = np.array([[(r >> (19 - c)) & 1 for c in range(20)] for r in rows], dtype=np.uint8)
    assert gf2_rank(mat) == ref.gf2_rank_rows(rows)


@settings(max_examples=200, deadline=None)
@given(bits=st.text(alphabet="01", min_size=1, max_size=300))
def test_linear_complexity_property(bits):
    L = linear_complexity(bits)
    assert L == ref.berlekamp_massey(bits)
    assert 0 <= L <= len(bits)


@settings(max_examples=50, deadline=None)
@given(bits=st.text(alphabet="01", min_size=200, max_size=2000))
def test_complement_symmetry(bits):
    flipped = bits.translate(str.maketrans("01", "10"))
    for fn in (t01_monobit, t03_runs, t13_cusum):
        assert fn(bits).p_values == pytest.approx(fn(flipped).p_values, abs=1e-12)
    # complementing mirrors the walk, so state x trades places with -x
    assert t15_excursions_variant(bits).p_values == pytest.approx(
        t15_excursions_variant(flipped).p_values[::-1], abs=1e-12)
    # adding the all-ones sequence (complexity 1) moves the complexity by at most one
    assert abs(linear_complexity(bits) - linear_complexity(flipped)) <= 1


@settings(max_examples=50, deadline=None)
@given(bits=st.text(alphabet="01", min_size=10, max_size=2000))
def test_cusum_reverse_swaps_directions(bits):
    fwd, rev = t13_cusum(bits).p_values
    assert t13_cusum(bits[::-1]).p_values == pytest.approx((rev, fwd), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(bits=st.text(alphabet="01", min_size=64, max_size=3000))
def test_small_tests_match_reference(bits):
    assert p(t01_monobit(bits)) == pytest.approx(ref.monobit(bits)[0], abs=1e-9)
    assert p(t02_block_frequency(bits, 16)) == pytest.approx(ref.block_frequency(bits, 16)[0], abs=1e-9)
    assert p(t03_runs(bits)) == pytest.approx(ref.runs(bits)[0], abs=1e-9)
    assert t11_serial(bits, 4).p_values == pytest.approx(ref.serial(bits, 4), abs=1e-9)
    assert p(t12_approx_entropy(bits, 3)) == pytest.approx(ref.approximate_entropy(bits, 3)[0], abs=1e-9)
    assert t13_cusum(bits).p_values == pytest.approx(ref.cusum(bits), abs=1e-9)
    assert t15_excursions_variant(bits).p_values == pytest.approx(ref.excursions_variant(bits), abs=1e-9)


# --------------------------------------------------------------------------
# whole battery
# --------------------------------------------------------------------------

@pytest.fixture(scope="module")
def keystream_results():
    return run_all(generate(1, b"battery key", 1_342_400 // 8))


def test_run_all_shape(keystream_results):
    assert [r.test_id for r in keystream_results] == list(range(1, 16))
    for r in keystream_results:
        assert len(r.p_values) == P_VALUE_COUNTS[r.test_id]
        assert all(0.0 <= v <= 1.0 for v in r.p_values)
    t7 = keystream_results[6]
    assert len(t7.stats["all_p_values"]) == 148 and t7.p_values[0] == t7.stats["all_p_values"][0]


def test_all_zero_input_fails_hard():
    res = run_all(np.zeros(1_342_400, dtype=np.uint8))
    assert res[0].p_values[0] < 1e-100
    assert all(0.0 <= v <= 1.0 for r in res for v in r.p_values)


def test_bit_order_is_msb_first():
    assert BIT_ORDER == "msb-first"
    assert as_bits(b"\x80\x01").tolist() == [1] + [0] * 7 + [0] * 7 + [1]
    assert BitSequence.from_bytes(b"\xf0", 4).text() == "1111"


def test_bit_sequence_loading(tmp_path):
    raw = tmp_path / "raw.bin"
    raw.write_bytes(bytes([0x30, 0x31, 0xFF]))  # not pure ASCII digits
    assert len(BitSequence.from_file(raw)) == 24
    txt = tmp_path / "bits.txt"
    txt.write_text("0101\n1100\n")
    assert BitSequence.from_file(txt).text() == "01011100"
    assert BitSequence.from_file(txt, 3).text() == "010"
    with pytest.raises(ConfigError):
        BitSequence.from_file(txt, 100)
    empty = tmp_path / "empty"
    empty.write_bytes(b"")
    with pytest.raises(ConfigError):
        BitSequence.from_file(empty)
    with pytest.raises(ConfigError):
        BitSequence(np.array([0, 2]))


def test_parameter_validation():
    with pytest.raises(ConfigError):
        t04_longest_run("01" * 10)
    with pytest.raises(ConfigError):
        t08_overlapping_template("01" * 2000, m=5, M=100)
    with pytest.raises(ConfigError):
        t09_universal("01" * 1000)
    with pytest.raises(ConfigError):
        t07_nonoverlapping_template("0101", 9, "0000000011")
    assert "serial_m=16" in TestParams().describe()
