"""The fifteen SP 800-22 randomness tests.

Every test takes a bit sequence (anything :func:`as_bits` accepts) and
returns a :class:`TestResult`. Parameters default to the standard suite
values; class-probability tables are the published constants.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
from numba import njit

from ..errors import ConfigError
from .bits import as_bits
from .special import erfc, igamc, normal_cdf

TEST_NAMES = {
    1: "Frequency (Monobit)",
    2: "Frequency within a Block",
    3: "Runs",
    4: "Longest Run of Ones in a Block",
    5: "Binary Matrix Rank",
    6: "Discrete Fourier Transform (Spectral)",
    7: "Non-overlapping Template Matching",
    8: "Overlapping Template Matching",
    9: "Maurer's Universal Statistical",
    10: "Linear Complexity",
    11: "Serial",
    12: "Approximate Entropy",
    13: "Cumulative Sums",
    14: "Random Excursions",
    15: "Random Excursions Variant",
}

P_VALUE_COUNTS = {t: 1 for t in TEST_NAMES} | {11: 2, 13: 2, 14: 8, 15: 18}


@dataclass(frozen=True)
class TestResult:
    __test__ = False  # keep pytest from collecting this class

    test_id: int
    p_values: tuple[float, ...]
    valid: bool = True
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def name(self) -> str:
        return TEST_NAMES[self.test_id]

    def __post_init__(self) -> None:
        clean = []
        for p in self.p_values:
            p = float(p)
            if math.isnan(p):
                raise ArithmeticError(f"test {self.test_id} produced a NaN P-value")
            clean.append(min(1.0, max(0.0, p)))
        object.__setattr__(self, "p_values", tuple(clean))


@dataclass(frozen=True)
class TestParams:
    __test__ = False

    block_frequency_m: int = 128
    longest_run_m: int | None = None   # chosen from n when None
    rank_rows: int = 32
    rank_cols: int = 32
    template_m: int = 9
    template_blocks: int = 8
    overlapping_m: int = 9
    overlapping_block: int = 1032
    universal_l: int | None = None     # chosen from n when None
    universal_q: int | None = None     # 10 * 2**L when None
    linear_m: int = 500
    serial_m: int = 16
    apen_m: int = 10

    def describe(self) -> str:
        return ", ".join(f"{k}={'auto' if v is None else v}" for k, v in asdict(self).items())


def _chi2(observed: np.ndarray, expected: np.ndarray) -> float:
    observed = np.asarray(observed, dtype=np.float64)
    return float(np.sum((observed - expected) ** 2 / expected))


def _windows(bits: np.ndarray, m: int, cyclic: bool = False) -> np.ndarray:
    """Integer value of every m-bit window (MSB first)."""
    src = np.concatenate([bits, bits[: m - 1]]) if cyclic and m > 1 else bits
    count = src.size - m + 1
    if count <= 0:
        return np.zeros(0, dtype=np.int64)
    out = np.zeros(count, dtype=np.int64)
    for k in range(m):
        out = (out << 1) | src[k:k + count]
    return out


# ---------------------------------------------------------------------------
# 1-3: frequency, block frequency, runs
# ---------------------------------------------------------------------------

def t01_monobit(seq) -> TestResult:
    bits = as_bits(seq)
    n = bits.size
    s = abs(2 * int(bits.sum()) - n)
    p = erfc(s / math.sqrt(2.0 * n))
    return TestResult(1, (p,), stats={"s": s, "n": n})


def t02_block_frequency(seq, M: int = 128) -> TestResult:
    bits = as_bits(seq)
    N = bits.size // M
    if M < 1 or N < 1:
        raise ConfigError(f"block frequency needs 1 <= M <= n (M={M}, n={bits.size})")
    pi = bits[: N * M].reshape(N, M).sum(axis=1) / M
    chi2 = 4.0 * M * float(np.sum((pi - 0.5) ** 2))
    return TestResult(2, (igamc(N / 2.0, chi2 / 2.0),), stats={"chi2": chi2, "N": N, "M": M})


def t03_runs(seq) -> TestResult:
    bits = as_bits(seq)
    n = bits.size
    pi = float(bits.sum()) / n
    if abs(pi - 0.5) >= 2.0 / math.sqrt(n):
        # frequency prerequisite failed; the runs statistic is not applicable
        return TestResult(3, (0.0,), valid=False, stats={"pi": pi})
    v = 1 + int(np.count_nonzero(bits[1:] != bits[:-1]))
    num = abs(v - 2.0 * n * pi * (1.0 - pi))
    den = 2.0 * math.sqrt(2.0 * n) * pi * (1.0 - pi)
    return TestResult(3, (erfc(num / den),), stats={"pi": pi, "V": v})


# ---------------------------------------------------------------------------
# 4: longest run of ones
# ---------------------------------------------------------------------------

# block length -> (lowest class, highest class, class probabilities)
LONGEST_RUN_TABLES = {
    8: (1, 4, (0.2148, 0.3672, 0.2305, 0.1875)),
    128: (4, 9, (0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124)),
    512: (6, 11, (0.1170, 0.2460, 0.2523, 0.1755, 0.1027, 0.1124)),
    1000: (7, 12, (0.1307, 0.2437, 0.2452, 0.1714, 0.1002, 0.1088)),
    10000: (10, 16, (0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727)),
}


def longest_run_block_length(n: int) -> int:
    if n < 128:
        raise ConfigError("longest-run test needs n >= 128")
    if n < 6272:
        return 8
    if n < 750000:
        return 128
    return 10000


@njit(cache=True)
def _longest_runs(bits, M, N):
    out = np.zeros(N, dtype=np.int64)
    for b in range(N):
        best = 0
        run = 0
        for k in range(b * M, (b + 1) * M):
            if bits[k]:
                run += 1
                if run > best:
                    best = run
            else:
                run = 0
        out[b] = best
    return out


def t04_longest_run(seq, M: int | None = None) -> TestResult:
    bits = as_bits(seq)
    M = longest_run_block_length(bits.size) if M is None else M
    if M not in LONGEST_RUN_TABLES:
        raise ConfigError(f"no class table for block length {M}")
    lo, hi, pi = LONGEST_RUN_TABLES[M]
    N = bits.size // M
    if N < 1:
        raise ConfigError("sequence shorter than one block")
    runs = _longest_runs(bits, M, N)
    nu = np.bincount(np.clip(runs, lo, hi) - lo, minlength=len(pi))
    chi2 = _chi2(nu, N * np.asarray(pi))
    K = len(pi) - 1
    return TestResult(4, (igamc(K / 2.0, chi2 / 2.0),),
                      stats={"M": M, "N": N, "nu": nu.tolist(), "chi2": chi2})


# ---------------------------------------------------------------------------
# 5: binary matrix rank
# ---------------------------------------------------------------------------

@njit(cache=True)
def _rank_of_rows(rows, ncols):
    rank = 0
    nrows = rows.shape[0]
    for col in range(ncols - 1, -1, -1):
        bit = np.uint64(1) << np.uint64(col)
        pivot = -1
        for r in range(rank, nrows):
            if rows[r] & bit:
                pivot = r
                break
        if pivot < 0:
            continue
        tmp = rows[rank]
        rows[rank] = rows[pivot]
        rows[pivot] = tmp
        for r in range(nrows):
            if r != rank and rows[r] & bit:
                rows[r] ^= rows[rank]
        rank += 1
        if rank == nrows:
            break
    return rank


@njit(cache=True)
def _block_ranks(packed, nrows, ncols, count):
    out = np.zeros(count, dtype=np.int64)
    rows = np.empty(nrows, dtype=np.uint64)
    for k in range(count):
        for r in range(nrows):
            rows[r] = packed[k * nrows + r]
        out[k] = _rank_of_rows(rows, ncols)
    return out


def _pack_rows(bits: np.ndarray, ncols: int) -> np.ndarray:
    """Each ``ncols``-bit row as an integer, first bit most significant."""
    rows = bits.reshape(-1, ncols).astype(np.uint64)
    weights = np.uint64(1) << np.arange(ncols - 1, -1, -1, dtype=np.uint64)
    return (rows * weights).sum(axis=1, dtype=np.uint64)


def gf2_rank(matrix) -> int:
    """Rank over GF(2) of a 0/1 matrix with at most 64 columns."""
    mat = np.asarray(matrix, dtype=np.uint8)
    if mat.ndim != 2 or mat.shape[1] > 64:
        raise ConfigError("gf2_rank takes a 2-D matrix with at most 64 columns")
    if mat.size == 0:
        return 0
    return int(_rank_of_rows(_pack_rows(mat.ravel(), mat.shape[1]), mat.shape[1]))


@lru_cache(maxsize=None)
def rank_probabilities(M: int, Q: int) -> tuple[float, float, float]:
    """P(rank = full), P(rank = full - 1), P(rank <= full - 2) for random M x Q matrices."""
    def p_rank(r: int) -> float:
        prod = 1.0
        for i in range(r):
            prod *= (1.0 - 2.0 ** (i - Q)) * (1.0 - 2.0 ** (i - M)) / (1.0 - 2.0 ** (i - r))
        return 2.0 ** (r * (Q + M - r) - M * Q) * prod

    full = min(M, Q)
    p0, p1 = p_rank(full), p_rank(full - 1)
    return p0, p1, 1.0 - p0 - p1


def t05_matrix_rank(seq, M: int = 32, Q: int = 32) -> TestResult:
    bits = as_bits(seq)
    if not (1 <= Q <= 64 and M >= 2):
        raise ConfigError("matrix rank test supports 2 <= rows and 1 <= cols <= 64")
    N = bits.size // (M * Q)
    if N < 1:
        raise ConfigError("sequence shorter than one matrix")
    ranks = _block_ranks(_pack_rows(bits[: N * M * Q], Q), M, Q, N)
    full = min(M, Q)
    counts = np.array([np.sum(ranks == full), np.sum(ranks == full - 1), 0])
    counts[2] = N - counts[0] - counts[1]
    chi2 = _chi2(counts, N * np.asarray(rank_probabilities(M, Q)))
    return TestResult(5, (igamc(1.0, chi2 / 2.0),),
                      stats={"N": N, "counts": counts.tolist(), "chi2": chi2})


# ---------------------------------------------------------------------------
# 6: spectral
# ---------------------------------------------------------------------------

def t06_dft(seq) -> TestResult:
    bits = as_bits(seq)
    n = bits.size
    x = 2.0 * bits - 1.0
    mags = np.abs(np.fft.rfft(x))[: n // 2]
    threshold = math.sqrt(math.log(1.0 / 0.05) * n)
    n1 = int(np.count_nonzero(mags < threshold))
    n0 = 0.95 * n / 2.0
    d = (n1 - n0) / math.sqrt(n * 0.95 * 0.05 / 4.0)
    return TestResult(6, (erfc(abs(d) / math.sqrt(2.0)),),
                      stats={"N1": n1, "N0": n0, "d": d, "T": threshold})


# ---------------------------------------------------------------------------
# 7-8: template matching
# ---------------------------------------------------------------------------

def _template_int(template: "str | int", m: int) -> int:
    if isinstance(template, str):
        if len(template) != m or set(template) - {"0", "1"}:
            raise ConfigError(f"template {template!r} is not an {m}-bit string")
        return int(template, 2)
    if not 0 <= template < 1 << m:
        raise ConfigError(f"template {template} does not fit in {m} bits")
    return int(template)


@lru_cache(maxsize=None)
def aperiodic_templates(m: int) -> tuple[str, ...]:
    """All m-bit patterns that cannot overlap a shifted copy of themselves, in lexicographic order."""
    out = []
    for v in range(1 << m):
        s = format(v, f"0{m}b")
        if all(s[k:] != s[: m - k] for k in range(1, m)):
            out.append(s)
    return tuple(out)


@njit(cache=True)
def _nonoverlap_counts(w, M, N, m, templates):
    out = np.zeros((templates.shape[0], N), dtype=np.int64)
    for t in range(templates.shape[0]):
        tpl = templates[t]
        for b in range(N):
            k = b * M
            end = b * M + M - m
            c = 0
            while k <= end:
                if w[k] == tpl:
                    c += 1
                    k += m
                else:
                    k += 1
            out[t, b] = c
    return out


def t07_nonoverlapping_template(seq, m: int = 9, templates=None, n_blocks: int = 8) -> TestResult:
    """Non-overlapping matches of aperiodic templates, scored per template.

    The reported P-value is the first template's. ``stats['all_p_values']``
    carries one P-value per template, in the order of ``stats['templates']``.
    """
    bits = as_bits(seq)
    if templates is None:
        templates = aperiodic_templates(m)
    elif isinstance(templates, (str, int)):
        templates = (templates,)
    if not templates:
        raise ConfigError("no templates given")
    tpl_ints = np.array([_template_int(t, m) for t in templates], dtype=np.int64)
    N = n_blocks
    M = bits.size // N
    if M < m:
        raise ConfigError("blocks are shorter than the template")
    mu = (M - m + 1) / 2.0 ** m
    var = M * (1.0 / 2.0 ** m - (2.0 * m - 1.0) / 2.0 ** (2 * m))
    counts = _nonoverlap_counts(_windows(bits[: N * M], m), M, N, m, tpl_ints)
    chi2 = ((counts - mu) ** 2).sum(axis=1) / var
    ps = tuple(igamc(N / 2.0, c / 2.0) for c in chi2)
    return TestResult(7, (ps[0],), stats={
        "templates": tuple(format(int(t), f"0{m}b") for t in tpl_ints),
        "all_p_values": ps,
        "W": counts[0].tolist(),
        "chi2": float(chi2[0]),
    })


# Poisson-asymptotic class probabilities for m = 9, M = 1032, K = 5 (eta = 1),
# as used by the NIST sts-2.1.2 reference code
OVERLAPPING_PI = (0.36787944117144233, 0.18393972058572114, 0.13795479043929088,
                  0.09963401531726565, 0.06993541459769613, 0.14065661788858386)


def overlapping_counts(seq, template: "str | int", M: int) -> np.ndarray:
    """Overlapping occurrences of ``template`` inside each M-bit block."""
    bits = as_bits(seq)
    m = len(template) if isinstance(template, str) else None
    if m is None:
        raise ConfigError("give the template as a bit string")
    N = bits.size // M
    hit = (_windows(bits[: N * M], m) == _template_int(template, m)).astype(np.int64)
    padded = np.zeros(N * M, dtype=np.int64)
    padded[: hit.size] = hit
    return padded.reshape(N, M)[:, : M - m + 1].sum(axis=1)


def t08_overlapping_template(seq, m: int = 9, M: int = 1032, template: str | None = None,
                             pi: tuple[float, ...] | None = None) -> TestResult:
    bits = as_bits(seq)
    if pi is None:
        if (m, M) != (9, 1032):
            raise ConfigError("class probabilities are tabulated for m=9, M=1032 only; pass pi")
        pi = OVERLAPPING_PI
    template = "1" * m if template is None else template
    N = bits.size // M
    if N < 1:
        raise ConfigError("sequence shorter than one block")
    K = len(pi) - 1
    counts = overlapping_counts(bits, template, M)
    nu = np.bincount(np.minimum(counts, K), minlength=K + 1)
    chi2 = _chi2(nu, N * np.asarray(pi))
    return TestResult(8, (igamc(K / 2.0, chi2 / 2.0),),
                      stats={"N": N, "nu": nu.tolist(), "chi2": chi2})


# ---------------------------------------------------------------------------
# 9: universal
# ---------------------------------------------------------------------------

UNIVERSAL_EXPECTED = (0.0, 0.7326495, 1.5374383, 2.4016068, 3.3112247, 4.2534266, 5.2177052,
                      6.1962507, 7.1836656, 8.1764248, 9.1723243, 10.170032, 11.168765,
                      12.168070, 13.167693, 14.167488, 15.167379)
UNIVERSAL_VARIANCE = (0.0, 0.690, 1.338, 1.901, 2.358, 2.705, 2.954, 3.125, 3.238, 3.311, 3.356,
                      3.384, 3.401, 3.410, 3.416, 3.419, 3.421)
# (minimum n, L)
UNIVERSAL_L_TABLE = ((1059061760, 16), (496435200, 15), (231669760, 14), (107560960, 13),
                     (49643520, 12), (22753280, 11), (10342400, 10), (4654080, 9),
                     (2068480, 8), (904960, 7), (387840, 6))


def universal_block_length(n: int) -> int:
    for min_n, L in UNIVERSAL_L_TABLE:
        if n >= min_n:
            return L
    raise ConfigError("universal test needs n >= 387840 unless L and Q are given")


@njit(cache=True)
def _universal_sum(blocks, L, Q):
    last = np.zeros(1 << L, dtype=np.int64)
    for i in range(Q):
        last[blocks[i]] = i + 1
    total = 0.0
    for i in range(Q, blocks.shape[0]):
        total += math.log2(i + 1 - last[blocks[i]])
        last[blocks[i]] = i + 1
    return total


def t09_universal(seq, L: int | None = None, Q: int | None = None) -> TestResult:
    bits = as_bits(seq)
    n = bits.size
    L = universal_block_length(n) if L is None else L
    if not 1 <= L <= 16:
        raise ConfigError("universal test supports 1 <= L <= 16")
    Q = 10 * 2 ** L if Q is None else Q
    K = n // L - Q
    if K <= 0:
        raise ConfigError("sequence too short for the initialisation segment")
    nblocks = Q + K
    weights = 1 << np.arange(L - 1, -1, -1, dtype=np.int64)
    blocks = bits[: nblocks * L].reshape(nblocks, L).astype(np.int64) @ weights
    fn = _universal_sum(blocks, L, Q) / K
    c = 0.7 - 0.8 / L + (4.0 + 32.0 / L) * K ** (-3.0 / L) / 15.0
    sigma = c * math.sqrt(UNIVERSAL_VARIANCE[L] / K)
    p = erfc(abs(fn - UNIVERSAL_EXPECTED[L]) / (math.sqrt(2.0) * sigma))
    return TestResult(9, (p,), stats={"L": L, "Q": Q, "K": K, "fn": fn, "sigma": sigma})


# ---------------------------------------------------------------------------
# 10: linear complexity
# ---------------------------------------------------------------------------

@njit(cache=True)
def _parity(words):
    x = np.uint64(0)
    for w in words:
        x ^= w
    x ^= x >> np.uint64(32)
    x ^= x >> np.uint64(16)
    x ^= x >> np.uint64(8)
    x ^= x >> np.uint64(4)
    x ^= x >> np.uint64(2)
    x ^= x >> np.uint64(1)
    return x & np.uint64(1)


@njit(cache=True)
def _bm_length(s, C, B, T, W):
    """Berlekamp-Massey on bit-packed polynomials.

    ``W`` holds the reversed history (bit i = s[N - i]) so the discrepancy
    is the parity of ``C & W``; connection polynomials live in ``C``/``B``.
    """
    nw = C.shape[0]
    one = np.uint64(1)
    C[:] = 0
    B[:] = 0
    W[:] = 0
    C[0] = one
    B[0] = one
    L = 0
    m = -1
    for N in range(s.shape[0]):
        for k in range(nw - 1, 0, -1):
            W[k] = (W[k] << one) | (W[k - 1] >> np.uint64(63))
        W[0] = (W[0] << one) | np.uint64(s[N])
        for k in range(nw):
            T[k] = C[k] & W[k]
        if _parity(T):
            T[:] = C
            shift = N - m
            q = shift // 64
            r = np.uint64(shift % 64)
            for k in range(nw - 1, q - 1, -1):
                v = B[k - q] << r
                if r > 0 and k - q - 1 >= 0:
                    v |= B[k - q - 1] >> (np.uint64(64) - r)
                C[k] ^= v
            if 2 * L <= N:
                L = N + 1 - L
                m = N
                B[:] = T
    return L


@njit(cache=True)
def _block_complexities(bits, M, N):
    nw = (M + 64) // 64
    C = np.zeros(nw, dtype=np.uint64)
    B = np.zeros(nw, dtype=np.uint64)
    T = np.zeros(nw, dtype=np.uint64)
    W = np.zeros(nw, dtype=np.uint64)
    out = np.zeros(N, dtype=np.int64)
    for b in range(N):
        out[b] = _bm_length(bits[b * M:(b + 1) * M], C, B, T, W)
    return out


def linear_complexity(seq) -> int:
    """Length of the shortest LFSR generating the sequence (Berlekamp-Massey)."""
    bits = as_bits(seq)
    return int(_block_complexities(bits, bits.size, 1)[0])


# class probabilities as tabulated in the NIST sts-2.1.2 reference code
LINEAR_COMPLEXITY_PI = (0.01047, 0.03125, 0.125, 0.5, 0.25, 0.0625, 0.020833)


def t10_linear_complexity(seq, M: int = 500) -> TestResult:
    bits = as_bits(seq)
    N = bits.size // M
    if M < 2 or N < 1:
        raise ConfigError(f"linear complexity needs 2 <= M <= n (M={M})")
    L = _block_complexities(bits, M, N)
    sign = 1.0 if M % 2 == 0 else -1.0
    mu = M / 2.0 + (9.0 + (-1.0) ** (M + 1)) / 36.0 - (M / 3.0 + 2.0 / 9.0) / 2.0 ** M
    t = sign * (L - mu) + 2.0 / 9.0
    cls = np.searchsorted(np.array([-2.5, -1.5, -0.5, 0.5, 1.5, 2.5]), t, side="left")
    nu = np.bincount(cls, minlength=7)
    chi2 = _chi2(nu, N * np.asarray(LINEAR_COMPLEXITY_PI))
    return TestResult(10, (igamc(3.0, chi2 / 2.0),),
                      stats={"N": N, "nu": nu.tolist(), "chi2": chi2})


# ---------------------------------------------------------------------------
# 11-12: serial, approximate entropy
# ---------------------------------------------------------------------------

def _pattern_counts(bits: np.ndarray, m: int) -> np.ndarray:
    if m <= 0:
        return np.zeros(0, dtype=np.int64)
    return np.bincount(_windows(bits, m, cyclic=True), minlength=1 << m)


def _psi2(bits: np.ndarray, m: int) -> float:
    if m <= 0:
        return 0.0
    n = bits.size
    nu = _pattern_counts(bits, m)
    return float(2.0 ** m / n * float(np.dot(nu, nu)) - n)


def t11_serial(seq, m: int = 16) -> TestResult:
    bits = as_bits(seq)
    n = bits.size
    if m < 1 or m > 30:
        raise ConfigError("serial test supports 1 <= m <= 30")
    psi_m, psi_m1, psi_m2 = _psi2(bits, m), _psi2(bits, m - 1), _psi2(bits, m - 2)
    d1 = psi_m - psi_m1
    d2 = psi_m - 2.0 * psi_m1 + psi_m2
    p1 = igamc(2.0 ** (m - 2), d1 / 2.0)
    p2 = igamc(2.0 ** (m - 3), d2 / 2.0)
    valid = m <= int(math.log2(n)) - 1
    return TestResult(11, (p1, p2), valid=valid,
                      stats={"psi2": (psi_m, psi_m1, psi_m2), "del1": d1, "del2": d2})


def _phi(bits: np.ndarray, m: int) -> float:
    if m == 0:
        return 0.0
    c = _pattern_counts(bits, m)
    c = c[c > 0] / bits.size
    return float(np.sum(c * np.log(c)))


def t12_approx_entropy(seq, m: int = 10) -> TestResult:
    bits = as_bits(seq)
    n = bits.size
    if m < 1 or m > 24:
        raise ConfigError("approximate entropy supports 1 <= m <= 24")
    apen = _phi(bits, m) - _phi(bits, m + 1)
    chi2 = 2.0 * n * (math.log(2.0) - apen)
    valid = m < int(math.log2(n)) - 5
    return TestResult(12, (igamc(2.0 ** (m - 1), chi2 / 2.0),), valid=valid,
                      stats={"ApEn": apen, "chi2": chi2})


# ---------------------------------------------------------------------------
# 13-15: random walks
# ---------------------------------------------------------------------------

def cusum_p_value(z: int, n: int) -> float:
    sq = math.sqrt(n)
    total = 1.0
    for k in range(math.floor((-n / z + 1) / 4), math.floor((n / z - 1) / 4) + 1):
        total -= normal_cdf((4 * k + 1) * z / sq) - normal_cdf((4 * k - 1) * z / sq)
    for k in range(math.floor((-n / z - 3) / 4), math.floor((n / z - 1) / 4) + 1):
        total += normal_cdf((4 * k + 3) * z / sq) - normal_cdf((4 * k + 1) * z / sq)
    return total


def t13_cusum(seq) -> TestResult:
    """Forward then reverse cumulative-sum P-values."""
    bits = as_bits(seq)
    x = 2 * bits.astype(np.int64) - 1
    z_fwd = int(np.max(np.abs(np.cumsum(x))))
    z_rev = int(np.max(np.abs(np.cumsum(x[::-1]))))
    n = bits.size
    return TestResult(13, (cusum_p_value(z_fwd, n), cusum_p_value(z_rev, n)),
                      stats={"z": (z_fwd, z_rev)})


EXCURSION_STATES = (-4, -3, -2, -1, 1, 2, 3, 4)
VARIANT_STATES = tuple(range(-9, 0)) + tuple(range(1, 10))
# pi_k(x) for |x| = 1..4, k = 0..5 (k = 5 lumps five or more visits)
EXCURSION_PI = (
    (0.5000000000, 0.25000000000, 0.12500000000, 0.06250000000, 0.03125000000, 0.0312500000),
    (0.7500000000, 0.06250000000, 0.04687500000, 0.03515625000, 0.02636718750, 0.0791015625),
    (0.8333333333, 0.02777777778, 0.02314814815, 0.01929012346, 0.01607510288, 0.0803755144),
    (0.8750000000, 0.01562500000, 0.01367187500, 0.01196289063, 0.01046752930, 0.0732727051),
)


def _walk(bits: np.ndarray) -> tuple[np.ndarray, int]:
    s = np.cumsum(2 * bits.astype(np.int64) - 1)
    zeros = int(np.count_nonzero(s == 0))
    J = zeros + (1 if s[-1] != 0 else 0)
    return s, J


def excursion_threshold(n: int) -> float:
    return max(0.005 * math.sqrt(n), 500.0)


def t14_random_excursions(seq) -> TestResult:
    bits = as_bits(seq)
    s, J = _walk(bits)
    # cycle index of each step: number of returns to zero strictly before it
    cycle = np.concatenate([[0], np.cumsum(s[:-1] == 0)])
    nus, ps = [], []
    for x in EXCURSION_STATES:
        visits = np.bincount(cycle[s == x], minlength=J)[:J]
        nu = np.bincount(np.minimum(visits, 5), minlength=6)
        expected = J * np.asarray(EXCURSION_PI[abs(x) - 1])
        chi2 = _chi2(nu, expected)
        nus.append(nu.tolist())
        ps.append(igamc(2.5, chi2 / 2.0))
    return TestResult(14, tuple(ps), valid=J >= excursion_threshold(bits.size),
                      stats={"J": J, "states": EXCURSION_STATES, "nu": nus})


def t15_excursions_variant(seq) -> TestResult:
    bits = as_bits(seq)
    s, J = _walk(bits)
    counts = np.bincount(s[np.abs(s) <= 9] + 9, minlength=19)
    xi, ps = [], []
    for x in VARIANT_STATES:
        c = int(counts[x + 9])
        xi.append(c)
        ps.append(erfc(abs(c - J) / math.sqrt(2.0 * J * (4.0 * abs(x) - 2.0))))
    return TestResult(15, tuple(ps), valid=J >= excursion_threshold(bits.size),
                      stats={"J": J, "states": VARIANT_STATES, "xi": xi})


# ---------------------------------------------------------------------------
# whole battery
# ---------------------------------------------------------------------------

def run_all(seq, params: TestParams | None = None) -> list[TestResult]:
    """All fifteen tests in order 1..15."""
    p = params or TestParams()
    bits = as_bits(seq)
    return [
        t01_monobit(bits),
        t02_block_frequency(bits, p.block_frequency_m),
        t03_runs(bits),
        t04_longest_run(bits, p.longest_run_m),
        t05_matrix_rank(bits, p.rank_rows, p.rank_cols),
        t06_dft(bits),
        t07_nonoverlapping_template(bits, p.template_m, n_blocks=p.template_blocks),
        t08_overlapping_template(bits, p.overlapping_m, p.overlapping_block),
        t09_universal(bits, p.universal_l, p.universal_q),
        t10_linear_complexity(bits, p.linear_m),
        t11_serial(bits, p.serial_m),
        t12_approx_entropy(bits, p.apen_m),
        t13_cusum(bits),
        t14_random_excursions(bits),
        t15_excursions_variant(bits),
    ]
