"""SP 800-22 style randomness tests and multi-file aggregation."""

from .bits import BIT_ORDER, DEFAULT_BITS, BitSequence, as_bits
from .battery import (
    P_VALUE_COUNTS,
    TEST_NAMES,
    TestParams,
    TestResult,
    aperiodic_templates,
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
from .aggregate import (
    BIN_EDGES,
    POP_THRESHOLD,
    AggregateReport,
    TestRow,
    aggregate,
    bin_pvalues,
    epop,
    opop,
    pop,
    render_csv,
    render_text,
    run_suite,
)
