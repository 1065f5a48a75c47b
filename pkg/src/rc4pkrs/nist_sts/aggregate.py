"""Multi-file aggregation: P-value histograms, proportion of passes, uniformity."""

from __future__ import annotations

import csv
import io
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ..errors import ConfigError
from .battery import P_VALUE_COUNTS, TEST_NAMES, TestParams, TestResult, run_all
from .bits import BIT_ORDER, BitSequence
from .special import igamc

# lower edges of C1..C10; C0 is [0, 0.01)
BIN_EDGES = (0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
POP_THRESHOLD = 1e-4


def bin_pvalues(pvalues: Iterable[float]) -> tuple[int, ...]:
    """Counts for C0..C10 (closed-left, open-right; 1.0 lands in C10)."""
    pv = np.asarray(list(pvalues), dtype=np.float64)
    if pv.size and (np.isnan(pv).any() or pv.min() < 0.0 or pv.max() > 1.0):
        raise ConfigError("P-values must lie in [0, 1]")
    idx = np.searchsorted(np.asarray(BIN_EDGES), pv, side="right")
    return tuple(int(c) for c in np.bincount(idx, minlength=11))


def epop(alpha: float, p: int) -> float:
    """Lower edge of the acceptable proportion of passing P-values."""
    if not 0.0 < alpha < 1.0 or p < 1:
        raise ConfigError("epop needs 0 < alpha < 1 and p >= 1")
    return (1.0 - alpha) - 3.0 * math.sqrt(alpha * (1.0 - alpha) / p)


def opop(pvalues: Sequence[float], alpha: float) -> float:
    pv = np.asarray(pvalues, dtype=np.float64)
    if pv.size == 0:
        raise ConfigError("no P-values")
    return float(np.count_nonzero(pv > alpha)) / pv.size


def pop(bins: Sequence[int]) -> float:
    """Uniformity P-value of a C0..C10 histogram; C0 is folded into C1."""
    if len(bins) != 11:
        raise ConfigError("expected 11 bins C0..C10")
    cells = np.array([bins[0] + bins[1], *bins[2:]], dtype=np.float64)
    total = cells.sum()
    if total <= 0:
        raise ConfigError("empty histogram")
    expected = total / 10.0
    chi2 = float(np.sum((cells - expected) ** 2 / expected))
    return igamc(9.0 / 2.0, chi2 / 2.0)


@dataclass(frozen=True)
class TestRow:
    __test__ = False

    test_id: int
    bins: tuple[int, ...]
    epop: float
    opop: float
    pop: float
    invalid: int = 0  # P-values coming from results flagged invalid

    @property
    def p(self) -> int:
        return sum(self.bins)

    @property
    def r_o(self) -> bool:
        return self.opop > self.epop

    @property
    def r_p(self) -> bool:
        return self.pop > POP_THRESHOLD

    @property
    def name(self) -> str:
        return TEST_NAMES[self.test_id]


@dataclass(frozen=True)
class AggregateReport:
    rows: tuple[TestRow, ...]
    alpha: float
    files: int
    params: TestParams = field(default_factory=TestParams)
    nbits: int | None = None
    warnings: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(r.r_o and r.r_p for r in self.rows)

    def failures(self) -> list[int]:
        return [r.test_id for r in self.rows if not (r.r_o and r.r_p)]

    def row(self, test_id: int) -> TestRow:
        return next(r for r in self.rows if r.test_id == test_id)


def aggregate(per_file: Sequence[Sequence[TestResult]], alpha: float = 0.01,
              params: TestParams | None = None, nbits: int | None = None,
              drop_invalid: bool = False) -> AggregateReport:
    """Reduce per-file results (ordered by file) into one report row per test."""
    if not per_file:
        raise ConfigError("no files to aggregate")
    notes = []
    if len(per_file) < 2:
        notes.append("fewer than 2 files: proportion and uniformity checks have little power")
        warnings.warn(notes[-1], stacklevel=2)
    rows = []
    for test_id in sorted(TEST_NAMES):
        pvals: list[float] = []
        invalid = 0
        for results in per_file:
            res = next(r for r in results if r.test_id == test_id)
            if len(res.p_values) != P_VALUE_COUNTS[test_id]:
                raise ConfigError(f"test {test_id} returned {len(res.p_values)} P-values")
            if not res.valid:
                invalid += len(res.p_values)
                if drop_invalid:
                    continue
            pvals.extend(res.p_values)
        if not pvals:
            notes.append(f"test {test_id}: every result was invalid and dropped")
            rows.append(TestRow(test_id, (0,) * 11, float("nan"), 0.0, 0.0, invalid))
            continue
        bins = bin_pvalues(pvals)
        rows.append(TestRow(test_id, bins, epop(alpha, len(pvals)), opop(pvals, alpha),
                            pop(bins), invalid))
    return AggregateReport(tuple(rows), alpha, len(per_file), params or TestParams(),
                           nbits, tuple(notes))


def _run_one(bits: np.ndarray, params: TestParams) -> list[TestResult]:
    return run_all(bits, params)


def run_suite(files: Sequence[BitSequence], alpha: float = 0.01,
              params: TestParams | None = None, jobs: int = 1,
              drop_invalid: bool = False) -> AggregateReport:
    """All fifteen tests on every sequence, then :func:`aggregate`."""
    if not files:
        raise ConfigError("run_suite needs at least one bit sequence")
    params = params or TestParams()
    arrays = [f.bits if isinstance(f, BitSequence) else BitSequence(f).bits for f in files]
    if jobs > 1 and len(arrays) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_file = list(pool.map(_run_one, arrays, [params] * len(arrays)))
    else:
        per_file = [_run_one(a, params) for a in arrays]
    nbits = arrays[0].size if len({a.size for a in arrays}) == 1 else None
    return aggregate(per_file, alpha, params, nbits, drop_invalid)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _yn(flag: bool) -> str:
    return "Y" if flag else "N"


def render_text(report: AggregateReport) -> str:
    head = [
        f"# files={report.files} bits={report.nbits or 'mixed'} alpha={report.alpha} "
        f"bit-order={BIT_ORDER}",
        f"# params: {report.params.describe()}",
    ]
    head += [f"# warning: {w}" for w in report.warnings]
    cols = ["T#"] + [f"C{k}" for k in range(11)] + ["EPOP", "OPOP", "R_O", "POP", "R_P"]
    table = [cols]
    for r in report.rows:
        table.append([f"{r.test_id:02d}", *map(str, r.bins), f"{r.epop:.3f}", f"{r.opop:.3f}",
                      _yn(r.r_o), f"{r.pop:.3f}", _yn(r.r_p)])
    widths = [max(len(row[c]) for row in table) for c in range(len(cols))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in table]
    return "\n".join(head + lines) + "\n"


def render_csv(report: AggregateReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["test", "name", *[f"C{k}" for k in range(11)], "p", "EPOP", "OPOP", "R_O",
                     "POP", "R_P", "invalid"])
    for r in report.rows:
        writer.writerow([r.test_id, r.name, *r.bins, r.p, f"{r.epop:.6f}", f"{r.opop:.6f}",
                         _yn(r.r_o), f"{r.pop:.6f}", _yn(r.r_p), r.invalid])
    return buf.getvalue()
