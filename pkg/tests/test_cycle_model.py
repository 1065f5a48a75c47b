from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rc4pkrs.cycle_model import (
    FALLING,
    PIPELINE_FILL,
    RISING,
    budget,
    clock_count,
    clocks_from_trace,
    per_byte_cost,
    throughput_bps,
    trace,
)
from rc4pkrs.errors import ConfigError

# design -> (setup constant, clocks per byte), as tabulated for "RC4 for n byte"
CLOSED_FORMS = {
    1: (257, Fraction(1)),
    2: (1282, Fraction(1)),
    3: (642, Fraction(1, 2)),
    4: (1282, Fraction(1, 2)),
    5: (642, Fraction(1, 4)),
    6: (1282, Fraction(1, 4)),
    7: (642, Fraction(1, 8)),
}


def closed_form(d, n):
    setup, rate = CLOSED_FORMS[d]
    return setup + 2 + n * rate


@pytest.mark.parametrize("d", range(1, 8))
@pytest.mark.parametrize("n", [0, 1, 256, 10**6])
def test_clock_count_closed_forms(d, n):
    got = clock_count(d, n)
    assert isinstance(got, Fraction)
    assert got == closed_form(d, n)


def test_tabulated_examples():
    assert clock_count(1, 256) == 515
    assert clock_count(7, 256) == 676
    assert per_byte_cost(1, 259) == 2


# per-byte column as printed, for the rows whose constant agrees with the totals
PER_BYTE_COLUMN = {1: (1, 259), 2: (1, 1284), 4: (Fraction(1, 2), 1284),
                   5: (Fraction(1, 4), 644), 6: (Fraction(1, 4), 1284)}


@pytest.mark.parametrize("d", sorted(PER_BYTE_COLUMN))
@pytest.mark.parametrize("n", [1, 7, 256, 12345])
def test_per_byte_column(d, n):
    rate, const = PER_BYTE_COLUMN[d]
    assert per_byte_cost(d, n) == rate + Fraction(const, n)


@pytest.mark.parametrize("d", [3, 7])
def test_per_byte_from_totals_for_unrolled_single_and_quad(d):
    assert per_byte_cost(d, 100) == CLOSED_FORMS[d][1] + Fraction(644, 100)


@pytest.mark.parametrize("d", range(1, 8))
def test_per_byte_asymptote(d):
    assert abs(per_byte_cost(d, 10**12) - CLOSED_FORMS[d][1]) < Fraction(1, 10**8)


@given(d=st.integers(1, 7), n=st.integers(1, 10**9))
def test_monotone_in_n(d, n):
    assert clock_count(d, n + 1) > clock_count(d, n)
    assert per_byte_cost(d, n + 1) < per_byte_cost(d, n)


def test_budget_parts():
    b = budget(3)
    assert (b.init_clocks, b.ksa_clocks, b.pkrs_clocks, b.prga_fill_clocks) == (2, 128, 512, 2)
    assert b.setup == 642
    assert budget(1).setup == 257


def test_errors():
    with pytest.raises(ConfigError):
        clock_count(1, -1)
    with pytest.raises(ConfigError):
        per_byte_cost(1, 0)
    with pytest.raises(ConfigError):
        clock_count(8, 1)
    with pytest.raises(ConfigError):
        trace(1, -1)


def test_throughput():
    assert throughput_bps(1) == 8 * 200e6
    assert throughput_bps(7) == 64 * 194e6
    assert throughput_bps(3, 100e6) == 16 * 100e6


@pytest.mark.parametrize("d", range(1, 8))
@pytest.mark.parametrize("rounds", [0, 1, 2, 5, 33])
def test_trace_shape(d, rounds):
    tr = trace(d, rounds)
    edges = [e.edge for e in tr.events]
    assert edges[0] == RISING
    assert all(a != b for a, b in zip(edges, edges[1:]))
    cycles = [e.cycle for e in tr.events]
    assert cycles == sorted(cycles) and cycles[0] == 1
    per_round = budget(d).per_byte_rate.denominator
    assert tr.bytes_emitted == rounds * per_round
    emitted = [z for e in tr.events for z in e.z_indices]
    assert emitted == list(range(1, rounds * per_round + 1))
    for line in tr.lines():
        assert line.startswith("cycle ") and (" rising: " in line or " falling: " in line)


@pytest.mark.parametrize("d", range(1, 8))
@pytest.mark.parametrize("rounds", [1, 2, 3, 10, 100])
def test_trace_agrees_with_closed_form(d, rounds):
    n = rounds * budget(d).per_byte_rate.denominator
    assert clocks_from_trace(trace(d, rounds)) == clock_count(d, n)


@pytest.mark.parametrize("d", range(1, 8))
def test_empty_trace_differs_by_the_fill_constant(d):
    tr = trace(d, 0)
    assert tr.bytes_emitted == 0
    assert clock_count(d, 0) - clocks_from_trace(tr) == PIPELINE_FILL


def _first_emitting(tr):
    return next(e for e in tr.events if e.z_indices)


@pytest.mark.parametrize("d", [1, 2, 4, 6])
def test_first_byte_timing_one_byte_designs(d):
    e = _first_emitting(trace(d, 3))
    assert (e.cycle, e.edge) == (3, RISING)
    assert "Z_1=" in e.action


@pytest.mark.parametrize("d", [3, 5, 7])
def test_first_byte_timing_two_byte_designs(d):
    e = _first_emitting(trace(d, 3))
    assert (e.cycle, e.edge) == (2, FALLING)
    assert "swap" in e.action and "Z_1=" in e.action


def test_initialisation_event():
    first = trace(1, 0).events[0]
    assert str(first).startswith("cycle 1 rising: ")
    assert "j_0=0" in first.action
