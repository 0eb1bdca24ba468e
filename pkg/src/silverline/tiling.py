"""Inflation-substitution tilings of the half-line.

Prototile indices are 1-based everywhere in this module, matching the usual
R_1, ..., R_N labels.  Limits are only ever represented by finite prefixes.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidRuleError, PreconditionError
from .integers import enumerate_integers, value_of
from .matrices import IntMatrix, is_irreducible_matrix, is_primitive, perron, _wrap
from .numfield import FieldElement, field_sign
from .polynomials import IntPolynomial, SilverPolynomial
from .reals import AlgebraicReal, silver_number

MAX_MATERIALIZED = 5_000_000


@dataclass(frozen=True)
class Prototile:
    index: int
    length: FieldElement


@dataclass(frozen=True)
class IndicatorString:
    """Finite tile sequence; ``completed`` means positions past the end read as E."""

    entries: tuple
    completed: bool = True

    def __init__(self, entries: Iterable[int] = (), completed: bool = True):
        object.__setattr__(self, "entries", tuple(int(e) for e in entries))
        object.__setattr__(self, "completed", completed)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, k):
        return self.entries[k]

    def __or__(self, other: "IndicatorString") -> "IndicatorString":
        return IndicatorString(self.entries + other.entries, other.completed)

    def cut(self, k: int) -> "IndicatorString":
        return IndicatorString(self.entries[:k])

    def at(self, pos: int):
        """1-based entry, or ``'E'`` beyond the end."""
        return self.entries[pos - 1] if 1 <= pos <= len(self.entries) else "E"

    def startswith(self, other: "IndicatorString") -> bool:
        return self.entries[: len(other.entries)] == other.entries

    def __str__(self):
        return "|".join(map(str, self.entries))


@dataclass(frozen=True)
class SubstitutionRule:
    """Partition matrix plus an explicit ordered decomposition of each inflated prototile."""

    matrix: IntMatrix
    strings: tuple

    def __init__(self, matrix, strings: Sequence[Sequence[int]]):
        if not isinstance(matrix, IntMatrix):
            matrix = _wrap(matrix)
        strings = tuple(tuple(int(t) for t in s) for s in strings)
        if len(strings) != matrix.n:
            raise InvalidRuleError(f"{len(strings)} strings for a {matrix.n}x{matrix.n} matrix")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "strings", strings)

    @classmethod
    def from_strings(cls, strings: Sequence[Sequence[int]]) -> "SubstitutionRule":
        n = len(strings)
        rows = [[0] * n for _ in range(n)]
        for i, s in enumerate(strings):
            for t in s:
                if not 1 <= t <= n:
                    raise InvalidRuleError(f"tile index {t} out of range", row=i + 1, tile=t)
                rows[i][t - 1] += 1
        return cls(rows, strings)

    @classmethod
    def parse(cls, text: str) -> "SubstitutionRule":
        """Parse ``"12,1"``-style or ``"1 2;1"``-style rule strings."""
        parts = [p for p in text.replace(";", ",").split(",")]
        strings = []
        for p in parts:
            p = p.strip()
            strings.append([int(t) for t in (p.split() if " " in p else p)])
        return cls.from_strings(strings)

    @property
    def n(self) -> int:
        return self.matrix.n

    def check(self) -> None:
        bad = rule_mismatches(self)
        if bad:
            row, tile, expected, found = bad[0]
            raise InvalidRuleError(
                f"row {row}: tile {tile} occurs {found} times, matrix says {expected}",
                row=row, tile=tile, expected=expected, found=found,
            )


@dataclass(frozen=True)
class ConvergenceReport:
    mode: str  # "direct", "subsequence" or "none_within_budget"
    k: int | None
    prefix: IndicatorString
    start: int

    def __str__(self):
        if self.mode == "direct":
            return "direct (k=1)"
        if self.mode == "subsequence":
            return f"subsequence(k={self.k})"
        return "none within budget"


# -- rules ------------------------------------------------------------------------------


def rule_mismatches(rule: SubstitutionRule):
    """List of (row, tile, expected, found), 1-based, where counts disagree with the matrix."""
    out = []
    n = rule.n
    for i, s in enumerate(rule.strings):
        for t in s:
            if not 1 <= t <= n:
                out.append((i + 1, t, 0, s.count(t)))
        for j in range(n):
            found = s.count(j + 1)
            if found != rule.matrix[i, j]:
                out.append((i + 1, j + 1, rule.matrix[i, j], found))
    return out


def validate_rule(rule: SubstitutionRule) -> bool:
    return not rule_mismatches(rule)


def silver_rule(p, orders: dict | None = None) -> SubstitutionRule:
    """DW-companion rule: rho R_1 = ascending R_j with b_j = 1, rho R_j = R_{j-1}.

    ``orders`` may override the string of any row (1-based keys).
    """
    if not isinstance(p, SilverPolynomial):
        p = SilverPolynomial.from_poly(p)
    n = p.degree
    strings = [list(p.indices)] + [[j - 1] for j in range(2, n + 1)]
    for row, s in (orders or {}).items():
        strings[row - 1] = list(s)
    rule = SubstitutionRule.from_strings(strings)
    from .matrices import companion

    if rule.matrix != companion(p):
        raise InvalidRuleError("row override changes tile counts")
    return rule


def hat_rule(N: int) -> SubstitutionRule:
    """rho R^_j = R^_1 | R^_{j+1} (j < N) and rho R^_N = R^_1."""
    strings = [[1, j + 1] for j in range(1, N)] + [[1]]
    return SubstitutionRule.from_strings(strings)


def hat_lengths(N: int, modulus: IntPolynomial | None = None) -> list:
    """Lengths 1 and sum_{i=1}^{N-j+1} rho^{-i} for j = 2..N."""
    modulus = modulus or SilverPolynomial.distinguished(N).poly
    inv = FieldElement.generator(modulus).inverse()
    out = [FieldElement.from_int(modulus, 1)]
    for j in range(2, N + 1):
        total, p = FieldElement.from_int(modulus, 0), FieldElement.from_int(modulus, 1)
        for _ in range(N - j + 1):
            p = p * inv
            total = total + p
        out.append(total)
    return [Prototile(j + 1, length) for j, length in enumerate(out)]


# -- iteration ------------------------------------------------------------------------------


def ins_apply(rule: SubstitutionRule, s) -> IndicatorString:
    entries = s.entries if isinstance(s, IndicatorString) else tuple(s)
    out = []
    strings = rule.strings
    for t in entries:
        out.extend(strings[t - 1])
    if len(out) > MAX_MATERIALIZED:
        raise PreconditionError("indicator string too long to materialise")
    return IndicatorString(out)


def ins_power(rule: SubstitutionRule, s, k: int) -> IndicatorString:
    for _ in range(k):
        s = ins_apply(rule, s)
    return s if isinstance(s, IndicatorString) else IndicatorString(s)


def ultrametric_distance(x, y) -> Fraction:
    """2^-j for the first (1-based) position j where the E-completed sequences differ."""
    a = x.entries if isinstance(x, IndicatorString) else tuple(x)
    b = y.entries if isinstance(y, IndicatorString) else tuple(y)
    for j in range(max(len(a), len(b))):
        u = a[j] if j < len(a) else None
        v = b[j] if j < len(b) else None
        if u != v:
            return Fraction(1, 2 ** (j + 1))
    return Fraction(0)


def detect_convergence(rule: SubstitutionRule, start: int, k_budget: int | None = None) -> ConvergenceReport:
    """Smallest k <= budget with ins^k(R_start) beginning with R_start.

    Only the first letters matter, so the search follows the map
    i -> first letter of ins(R_i).
    """
    n = rule.n
    if not 1 <= start <= n:
        raise PreconditionError(f"start tile {start} out of range 1..{n}")
    if not is_irreducible_matrix(rule.matrix):
        raise PreconditionError("convergence detection needs an irreducible partition matrix")
    k_budget = n * n + 1 if k_budget is None else k_budget
    cur = start
    for k in range(1, k_budget + 1):
        cur = rule.strings[cur - 1][0]
        if cur == start:
            prefix = ins_power(rule, IndicatorString((start,)), k)
            return ConvergenceReport("direct" if k == 1 else "subsequence", k, prefix, start)
    return ConvergenceReport("none_within_budget", None, IndicatorString((start,)), start)


def limit_prefix(rule: SubstitutionRule, start: int, tile_count: int, report: ConvergenceReport | None = None) -> IndicatorString:
    """First ``tile_count`` tiles of the limit of ins^k iterates started at R_start."""
    report = report or detect_convergence(rule, start)
    if report.k is None:
        raise PreconditionError("no convergence mode; limit prefix undefined")
    k = report.k
    s = IndicatorString((start,))
    while len(s) < tile_count:
        nxt = ins_power(rule, s, k)
        if not nxt.startswith(s) or len(nxt) <= len(s):
            raise AssertionError("iterates failed to extend the previous prefix")
        s = nxt.cut(tile_count)
    return s.cut(tile_count)


# -- lengths and endpoints ---------------------------------------------------------------


def prototile_lengths(rule: SubstitutionRule):
    """Exact right-Perron lengths of the partition matrix with L(R_1) = 1; returns (tiles, rho)."""
    pd = perron(rule.matrix)
    return [Prototile(j + 1, w) for j, w in enumerate(pd.right_vector)], pd.rho


def endpoints(prefix, tiles: Sequence[Prototile], root: AlgebraicReal | None = None) -> list:
    """Partial sums 0 = y_0 < y_1 < ... of the tile lengths (positivity checked exactly)."""
    entries = prefix.entries if isinstance(prefix, IndicatorString) else tuple(prefix)
    lengths = {t.index: t.length for t in tiles}
    if not lengths:
        raise PreconditionError("no prototiles given")
    zero = next(iter(lengths.values())) * 0
    if root is not None:
        for t in tiles:
            if field_sign(t.length, root) <= 0:
                raise PreconditionError(f"prototile {t.index} has non-positive length")
    out = [zero]
    for e in entries:
        out.append(out[-1] + lengths[e])
    return out


# -- periodicity, counts, frequencies -----------------------------------------------------


@dataclass(frozen=True)
class PeriodicityReport:
    period: int | None  # smallest pure period <= max_period, if any
    eventual: tuple | None  # (offset, period) of the smallest eventual period, if any
    max_period: int
    length: int

    @property
    def periodic_evidence(self) -> bool:
        return self.period is not None or self.eventual is not None

    def __str__(self):
        if self.period is not None:
            return f"period {self.period} in first {self.length} tiles"
        if self.eventual is not None:
            j, m = self.eventual
            return f"eventual period {m} from offset {j} in first {self.length} tiles"
        return f"no period <= {self.max_period} in first {self.length} tiles"


def check_periodicity(prefix, max_period: int) -> PeriodicityReport:
    """Search the prefix for pure or eventual periods up to ``max_period``.

    An eventual period m with offset j means entries i and i+m agree for all
    i >= j inside the prefix; offsets are only accepted when j <= len/2.
    This can only refute periodicity up to the horizon, never prove it.
    """
    entries = prefix.entries if isinstance(prefix, IndicatorString) else tuple(prefix)
    n = len(entries)
    if n < 2 * max_period:
        raise PreconditionError(f"prefix of length {n} is shorter than 2*max_period")
    arr = np.asarray(entries, dtype=np.int64)
    pure, eventual = None, None
    for m in range(1, max_period + 1):
        diff = np.nonzero(arr[m:] != arr[:-m])[0]
        if diff.size == 0:
            pure = m
            break
        j = int(diff[-1]) + 1
        if eventual is None and j <= n // 2 and n - j >= 2 * m:
            eventual = (j, m)
    if pure is not None:
        eventual = (0, pure) if eventual is None or eventual[1] > pure else eventual
    return PeriodicityReport(pure, eventual, max_period, n)


def count_vector(s, n: int) -> tuple:
    entries = s.entries if isinstance(s, IndicatorString) else tuple(s)
    counts = [0] * n
    for e in entries:
        counts[e - 1] += 1
    return tuple(counts)


def count_evolution(rule: SubstitutionRule, start, iterations: int) -> list:
    """Tile-count vectors of ins^k(start) for k = 0..iterations, counted from the strings.

    Strings are materialised while small; beyond that the counts are pushed
    through the explicit decompositions (never through the matrix).
    """
    n = rule.n
    s = IndicatorString((start,) if isinstance(start, int) else start)
    counts = [count_vector(s, n)]
    per_string = [count_vector(t, n) for t in rule.strings]
    materialized = True
    for _ in range(iterations):
        if materialized and len(s) * max(len(t) for t in rule.strings) <= MAX_MATERIALIZED // 5:
            s = ins_apply(rule, s)
            counts.append(count_vector(s, n))
        else:
            materialized = False
            prev = counts[-1]
            counts.append(tuple(sum(prev[i] * per_string[i][j] for i in range(n)) for j in range(n)))
    return counts


def matrix_count_evolution(matrix: IntMatrix, d0: Sequence[int], iterations: int) -> list:
    """d^(k) = (U^tr)^k d^(0)."""
    ut = matrix.transpose()
    out = [tuple(d0)]
    for _ in range(iterations):
        out.append(tuple(ut.apply(list(out[-1]))))
    return out


@dataclass(frozen=True)
class FrequencyReport:
    frequencies: tuple  # per iteration, tuple of Fractions
    distances: tuple  # Euclidean distance to the normalised Perron direction (float)
    limit: tuple  # normalised Perron direction of U^tr (float)


def frequency_drift(rule: SubstitutionRule, start, iterations: int) -> FrequencyReport:
    if not is_primitive(rule.matrix):
        raise PreconditionError("frequency convergence needs a primitive partition matrix")
    pd = perron(rule.matrix.transpose())
    digits = 30
    raw = [Fraction(e.decimal(pd.rho, digits)) for e in pd.right_vector]
    total = sum(raw)
    limit = tuple(float(x / total) for x in raw)
    limit_exact = [x / total for x in raw]
    freqs, dists = [], []
    for c in count_evolution(rule, start, iterations):
        s = sum(c)
        f = tuple(Fraction(x, s) for x in c)
        freqs.append(f)
        dists.append(float(sum((a - b) ** 2 for a, b in zip(f, limit_exact))) ** 0.5)
    return FrequencyReport(tuple(freqs), tuple(dists), limit)


# -- comparisons with the integer tilings -------------------------------------------------


@dataclass(frozen=True)
class IntegerTilingReport:
    N: int
    tile_count: int
    hat_equals_integers: bool
    first_mismatch: int | None  # index of the first differing endpoint
    integers_in_dw: bool
    first_missing: int | None  # index of the first integer not among DW endpoints
    dw_equals_hat: bool  # prototiles and prefixes coincide (expected only for N = 2)


def integer_vs_substitution(N: int, tile_count: int) -> IntegerTilingReport:
    poly = SilverPolynomial.distinguished(N).poly
    root = silver_number(poly)
    ints = [value_of(x, poly) for x in enumerate_integers(N, tile_count + 1)]

    hat = hat_rule(N)
    hat_tiles = hat_lengths(N, poly)
    hat_pts = endpoints(limit_prefix(hat, 1, tile_count), hat_tiles, root)
    mismatch = next((i for i, (a, b) in enumerate(zip(ints, hat_pts)) if a != b), None)

    dw = silver_rule(SilverPolynomial.distinguished(N))
    inv = FieldElement.generator(poly).inverse()
    dw_tiles = [Prototile(j, inv ** (j - 1)) for j in range(1, N + 1)]
    # the DW tiling is finer; take enough tiles to pass the largest integer
    count = tile_count
    while True:
        dw_pts = endpoints(limit_prefix(dw, 1, count), dw_tiles, root)
        if field_sign(dw_pts[-1] - ints[-1], root) >= 0:
            break
        count *= 2
    dw_set = set(dw_pts)
    missing = next((i for i, v in enumerate(ints) if v not in dw_set), None)
    same = [t.length for t in dw_tiles] == [t.length for t in hat_tiles] and dw.strings == hat.strings
    return IntegerTilingReport(N, tile_count, mismatch is None, mismatch, missing is None, missing, same)


def nonprimitive_correspondence(p: SilverPolynomial, tile_count: int):
    """Compare the tiling of U_P (P = Q(X^d)) with the tiling of U_Q.

    Under ins^d the limit from R_1 only uses the tiles R_1, R_{1+d}, R_{1+2d}, ...;
    relabelling R_{1+id} -> R_{1+i} must reproduce the Q-tiling.
    Returns (matches, mapping, k).
    """
    from .matrices import decompose_nonprimitive

    q, d = decompose_nonprimitive(p)
    rule_p, rule_q = silver_rule(p), silver_rule(q)
    rep = detect_convergence(rule_p, 1)
    prefix_p = limit_prefix(rule_p, 1, tile_count, rep)
    prefix_q = limit_prefix(rule_q, 1, tile_count)
    mapping = {1 + i * d: 1 + i for i in range(q.degree)}
    if any(t not in mapping for t in prefix_p.entries):
        return False, mapping, rep.k
    relabelled = tuple(mapping[t] for t in prefix_p.entries)
    return relabelled == prefix_q.entries, mapping, rep.k
