"""Random generation: exact-size uniform sampling by the recursive method,
free-size Boltzmann generation over the level systems, and the derived
profile and height statistics.

Every draw consumes randomness from its own stream (seed + sample index),
so batches are reproducible and order-independent.  Big-integer weighted
choices use ``Random.randrange``, which rejects on fixed-width blocks and
is exactly uniform.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath
from mpmath import mp, mpf

from . import counting, radicals
from .errors import PrecisionError, UnsupportedFamilyError
from .terms import Binary, Family, Kind, Leaf, Term, Unary

_BOLTZMANN_KINDS = {
    Kind.LAMBDA_UNARY_HEIGHT,
    Kind.LAMBDA_BINDING_LENGTH,
    Kind.MOTZKIN_HEIGHT_EXACT,
    Kind.MOTZKIN_HEIGHT_AT_MOST,
}


@dataclass(frozen=True)
class SamplerSpec:
    family: Family
    size: int
    method: str = "recursive"
    seed: int = 0
    x: Optional[mpf] = None  # Boltzmann tuning; None = singular rho - 1 ulp
    window: Optional[tuple[int, int]] = None
    max_attempts: int = 100_000
    max_nodes: Optional[int] = None  # default 50x the window top
    precision: int = radicals.DEFAULT_PREC

    def __post_init__(self):
        if self.method not in ("recursive", "boltzmann"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "boltzmann":
            win = self.window or (self.size, self.size)
            if win[0] > win[1] or win[0] < 1:
                raise ValueError(f"empty size window {win}")


# ---------------------------------------------------------------------------
# shared table access

_table_cache: dict = {}


def get_table(fam: Family, max_size: int) -> counting.CountTable:
    key = (fam, max_size)
    if key not in _table_cache:
        _table_cache[key] = counting.count_family(fam, max_size)
    return _table_cache[key]


def clear_table_cache() -> None:
    _table_cache.clear()


# ---------------------------------------------------------------------------
# recursive method (exact size, exactly uniform)


def _root_state(fam: Family, table: counting.CountTable):
    if fam.kind == Kind.LAMBDA_EXACT_UNARY:
        return (fam.param, 0)
    if fam.kind == Kind.MOTZKIN_EXACT_UNARY:
        return fam.param
    return 0


def _unary_next(fam: Family, table: counting.CountTable, state):
    """Successor state under a unary node, or None when forbidden."""
    kind = fam.kind
    if kind in (Kind.LAMBDA_ALL, Kind.MOTZKIN):
        return state + 1 if kind == Kind.LAMBDA_ALL else state
    if kind == Kind.LAMBDA_EXACT_UNARY or kind == Kind.LAMBDA_AT_MOST_UNARY:
        l, m = state
        return (l - 1, m + 1) if l >= 1 else None
    if kind == Kind.MOTZKIN_EXACT_UNARY:
        return state - 1 if state >= 1 else None
    if kind == Kind.LAMBDA_BINDING_LENGTH:
        if table.note:  # vacuous bound: rows are unrestricted context rows
            return state + 1
        return min(state + 1, fam.param)
    # height-bounded kinds: move up while a row exists
    nxt = state + 1
    return nxt if nxt in table.rows else None


def _row(table: counting.CountTable, state) -> list[int]:
    return table.rows[state]


def sample_recursive(spec: SamplerSpec, index: int = 0, table: Optional[counting.CountTable] = None) -> Term:
    """One exactly-uniform draw at the exact size ``spec.size``.

    Weighted choices replay the counting recurrences: unary production
    first, then binary splits by increasing left size (and increasing
    budget share where a budget is split).
    """
    fam, n = spec.family, spec.size
    if table is None:
        table = get_table(fam, n)
    rng = random.Random(spec.seed + index)

    if fam.kind == Kind.LAMBDA_AT_MOST_UNARY:
        # stratify over the exact unary count, then sample the stratum
        weights = [(l, table.rows[(l, 0)][n]) for l in range(fam.param + 1) if (l, 0) in table.rows]
        total = sum(w for _, w in weights)
        if total == 0:
            raise ValueError(f"{fam.label()} has no terms of size {n}")
        r = rng.randrange(total)
        for l, w in weights:
            if r < w:
                chosen = l
                break
            r -= w
        inner = Family.lambda_exact_unary(chosen)
        return _generate(inner, table, n, rng)

    if table.count(n) == 0:
        raise ValueError(
            f"{fam.label()} has no terms of size {n}"
            + (" (parity)" if fam.parity_forbidden(n) else "")
        )
    return _generate(fam, table, n, rng)


def _generate(fam: Family, table: counting.CountTable, n: int, rng: random.Random) -> Term:
    todo: list = [("gen", _root_state(fam, table), n)]
    values: list[Term] = []
    is_lambda = fam.is_lambda
    while todo:
        op = todo.pop()
        if op[0] == "wrap-unary":
            values.append(Unary(values.pop()))
            continue
        if op[0] == "wrap-binary":
            right = values.pop()
            left = values.pop()
            values.append(Binary(left, right))
            continue
        _, state, m = op
        row = _row(table, state)
        if m == 1:
            colors = row[1]
            if colors == 0:
                raise ValueError(f"no leaf possible in state {state}")
            if is_lambda:
                values.append(Leaf(rng.randrange(colors) + 1))
            else:
                values.append(Leaf())
            continue
        total = row[m]
        r = rng.randrange(total)
        up = _unary_next(fam, table, state)
        if up is not None:
            w = table.rows[up][m - 1] if m - 1 < len(table.rows[up]) else 0
            if r < w:
                todo.append(("wrap-unary",))
                todo.append(("gen", up, m - 1))
                continue
            r -= w
        if fam.kind in (Kind.LAMBDA_EXACT_UNARY, Kind.LAMBDA_AT_MOST_UNARY, Kind.MOTZKIN_EXACT_UNARY):
            # split both the size and the unary budget
            if fam.kind == Kind.MOTZKIN_EXACT_UNARY:
                l, mm = state, None
            else:
                l, mm = state
            found = False
            for j in range(0, l + 1):
                s1 = j if mm is None else (j, mm)
                s2 = (l - j) if mm is None else (l - j, mm)
                row1, row2 = table.rows[s1], table.rows[s2]
                for a in range(1, m - 1):
                    w = (row1[a] if a < len(row1) else 0) * (
                        row2[m - 1 - a] if m - 1 - a < len(row2) else 0
                    )
                    if r < w:
                        todo.append(("wrap-binary",))
                        todo.append(("gen", s2, m - 1 - a))
                        todo.append(("gen", s1, a))
                        found = True
                        break
                    r -= w
                if found:
                    break
            if not found:
                raise PrecisionError("weighted choice overran the total")
        else:
            found = False
            for a in range(1, m - 1):
                w = (row[a] if a < len(row) else 0) * (
                    row[m - 1 - a] if m - 1 - a < len(row) else 0
                )
                if r < w:
                    todo.append(("wrap-binary",))
                    todo.append(("gen", state, m - 1 - a))
                    todo.append(("gen", state, a))
                    found = True
                    break
                r -= w
            if not found:
                raise PrecisionError("weighted choice overran the total")
    assert len(values) == 1
    return values[0]


def sample_many(spec: SamplerSpec, count: int) -> list[Term]:
    table = get_table(spec.family, spec.size)
    return [sample_recursive(spec, i, table) for i in range(count)]


# ---------------------------------------------------------------------------
# Boltzmann sampling over the level systems


@dataclass
class LevelProbabilities:
    """Per-level branch probabilities of the free generator at tuning x."""

    family: Family
    x: mpf
    p_stop: list
    p_unary: list
    p_binary: list
    leaf_choices: list

    def rows(self):
        for i in range(len(self.p_stop)):
            yield i, self.p_stop[i], self.p_unary[i], self.p_binary[i]

    def to_csv(self) -> str:
        lines = ["level,p_stop,p_unary,p_binary"]
        for i, s, u, b in self.rows():
            lines.append(
                f"{i},{mpmath.nstr(s, 12)},{mpmath.nstr(u, 12)},{mpmath.nstr(b, 12)}"
            )
        return "\n".join(lines) + "\n"


def _level_values(fam: Family, x: mpf, prec: int) -> list[mpf]:
    """Generating-function values of the level classes at x, outermost
    (root state i = 0) first."""
    chain = radicals.RadicalChain.for_family(fam)
    ev = radicals.eval_chain(chain, x, prec)
    if not ev.defined:
        raise ValueError(f"chain for {fam.label()} undefined at x = {mpmath.nstr(mpf(x), 12)}")
    k = fam.param
    values = []
    with mp.workprec(prec):
        x = mpf(x)
        for i in range(k + 1):
            radicand = ev.values[chain.depth - i - 1]
            if radicand < 0:
                raise ValueError(f"negative radicand at level {i}")
            adjust = x if (fam.kind == Kind.LAMBDA_BINDING_LENGTH and i == k) else mpf(0)
            values.append((1 - adjust - mpmath.sqrt(radicand)) / (2 * x))
    return values


def singular_tuning(fam: Family, prec: int = radicals.DEFAULT_PREC) -> mpf:
    """rho rounded toward zero by one ulp, so the chain stays defined."""
    chain = radicals.RadicalChain.for_family(fam)
    rho = radicals.find_rho(chain, prec)
    with mp.workprec(prec):
        return mpf(rho) * (1 - mpf(2) ** (4 - prec))


def boltzmann_probabilities(
    fam: Family, x=None, prec: int = radicals.DEFAULT_PREC
) -> LevelProbabilities:
    """Stop/unary/binary probabilities per level i = 0..k.

    With value P_i at level i the weights are leaf_i * x, x * P_{next(i)}
    and x * P_i^2, all over P_i; they sum to 1 by the defining equation,
    and a deviation beyond 2^-(prec/2) raises a precision alarm.
    """
    if fam.kind not in _BOLTZMANN_KINDS:
        raise UnsupportedFamilyError(f"no Boltzmann system for {fam.label()}")
    if x is None:
        x = singular_tuning(fam, prec)
    k = fam.param
    with mp.workprec(prec):
        x = mpf(x)
        values = _level_values(fam, x, prec)
        p_stop, p_unary, p_binary, leaf_choices = [], [], [], []
        tol = mpf(2) ** -(prec // 2)
        for i in range(k + 1):
            p = values[i]
            if p <= 0:
                raise PrecisionError(f"nonpositive level value at level {i}")
            if fam.kind == Kind.MOTZKIN_HEIGHT_EXACT:
                leaf_w = 1 if i == k else 0
            elif fam.kind == Kind.MOTZKIN_HEIGHT_AT_MOST:
                leaf_w = 1
            else:
                leaf_w = i
            if fam.kind == Kind.LAMBDA_BINDING_LENGTH and i == k:
                up_value = values[k]
            elif i < k:
                up_value = values[i + 1]
            else:
                up_value = None
            stop = leaf_w * x / p
            unary = (x * up_value / p) if up_value is not None else mpf(0)
            binary = x * p
            if abs(stop + unary + binary - 1) > tol:
                raise PrecisionError(
                    f"branch probabilities at level {i} sum to {stop + unary + binary}"
                )
            p_stop.append(stop)
            p_unary.append(unary)
            p_binary.append(binary)
            leaf_choices.append(leaf_w)
    return LevelProbabilities(fam, x, p_stop, p_unary, p_binary, leaf_choices)


@dataclass
class BoltzmannResult:
    term: Optional[Term]
    size: int
    attempts: int
    size_rejections: int
    guard_aborts: int
    window: tuple[int, int]


def sample_boltzmann(spec: SamplerSpec, index: int = 0) -> BoltzmannResult:
    """Free-size generation; accepted iff the size lands in the window.

    The per-level branch probabilities are computed at full precision and
    the draw loop uses their float64 images: the distortion (~1e-16 per
    branch) is orders below anything a finite sample can resolve.
    """
    fam = spec.family
    window = spec.window or (spec.size, spec.size)
    guard = spec.max_nodes or 50 * window[1]
    probs = boltzmann_probabilities(fam, spec.x, spec.precision)
    stop_f = [float(v) for v in probs.p_stop]
    unary_cum_f = [float(s + u) for s, u in zip(probs.p_stop, probs.p_unary)]
    leaf_choices = probs.leaf_choices
    is_lambda = fam.is_lambda
    k = fam.param
    saturate = fam.kind == Kind.LAMBDA_BINDING_LENGTH

    rng = random.Random(spec.seed + index)
    size_rejections = 0
    guard_aborts = 0
    for attempt in range(1, spec.max_attempts + 1):
        size = 0
        aborted = False
        todo = [("gen", 0)]
        values: list[Term] = []
        while todo:
            op = todo.pop()
            if op[0] == "wrap-unary":
                values.append(Unary(values.pop()))
                continue
            if op[0] == "wrap-binary":
                right = values.pop()
                left = values.pop()
                values.append(Binary(left, right))
                continue
            level = op[1]
            size += 1
            if size > guard:
                aborted = True
                break
            u = rng.random()
            if u < stop_f[level]:
                if is_lambda:
                    values.append(Leaf(rng.randrange(leaf_choices[level]) + 1))
                else:
                    values.append(Leaf())
            elif u < unary_cum_f[level]:
                nxt = min(level + 1, k) if saturate else level + 1
                todo.append(("wrap-unary",))
                todo.append(("gen", nxt))
            else:
                todo.append(("wrap-binary",))
                todo.append(("gen", level))
                todo.append(("gen", level))
        if aborted:
            guard_aborts += 1
            continue
        if window[0] <= size <= window[1]:
            return BoltzmannResult(values[0], size, attempt, size_rejections, guard_aborts, window)
        size_rejections += 1
    return BoltzmannResult(None, 0, spec.max_attempts, size_rejections, guard_aborts, window)


def boltzmann_mean_size(fam: Family, x, prec: int = radicals.DEFAULT_PREC) -> mpf:
    """Expected free-generation size x * d/dx log P_0(x), by central
    difference at a step ~2^(-prec/3)."""
    with mp.workprec(prec):
        x = mpf(x)
        h = x * mpf(2) ** -(prec // 3)
        hi = _level_values(fam, x + h, prec)[0]
        lo = _level_values(fam, x - h, prec)[0]
        return x * (mpmath.log(hi) - mpmath.log(lo)) / (2 * h)


# ---------------------------------------------------------------------------
# distribution of the unary height


def unary_height_histogram(n: int) -> list[Fraction]:
    """Exact distribution of the unary height of closed terms of size n:
    entry k is (count with height <= k minus count with height <= k-1)
    over the total.  Entries sum to exactly 1."""
    if n < 2:
        raise ValueError("no closed terms below size 2")
    total = get_table(Family.lambda_all(), n).count(n)
    hist = [Fraction(0)] * n
    prev = 0
    for k in range(1, n):
        cur = get_table(Family.lambda_unary_height(k), n).count(n)
        hist[k] = Fraction(cur - prev, total)
        prev = cur
    return hist


def unary_height_mass(n: int, k_lo: int, k_hi: int) -> Fraction:
    """Probability that the unary height lies in [k_lo, k_hi]; needs only
    two bounded-height tables instead of one per k."""
    if not 1 <= k_lo <= k_hi:
        raise ValueError("need 1 <= k_lo <= k_hi")
    total = get_table(Family.lambda_all(), n).count(n)
    hi = get_table(Family.lambda_unary_height(min(k_hi, n - 1)), n).count(n)
    lo = 0
    if k_lo > 1:
        lo = get_table(Family.lambda_unary_height(k_lo - 1), n).count(n)
    return Fraction(hi - lo, total)


# ---------------------------------------------------------------------------
# profiles


@dataclass
class ProfileAggregate:
    family: Family
    size: int
    samples: int
    depth_totals: list[int] = field(default_factory=list)
    unary_totals: list[int] = field(default_factory=list)

    def _means(self, totals: list[int]) -> list[float]:
        return [t / self.samples for t in totals]

    @property
    def mean_by_depth(self) -> list[float]:
        return self._means(self.depth_totals)

    @property
    def mean_by_unary_level(self) -> list[float]:
        return self._means(self.unary_totals)

    def to_csv(self, kind: str = "depth") -> str:
        means = self.mean_by_depth if kind == "depth" else self.mean_by_unary_level
        lines = ["level,mean_nodes"]
        for level, value in enumerate(means):
            lines.append(f"{level},{value!r}")
        return "\n".join(lines) + "\n"


def aggregate_profiles(spec: SamplerSpec, batch_size: int) -> ProfileAggregate:
    """Mean per-depth and per-unary-level node counts over a batch of
    independent draws (stream = seed + index)."""
    from .terms import stats as term_stats

    agg = ProfileAggregate(spec.family, spec.size, batch_size)
    table = None
    if spec.method == "recursive":
        table = get_table(spec.family, spec.size)
    for i in range(batch_size):
        if spec.method == "recursive":
            t = sample_recursive(spec, i, table)
        else:
            res = sample_boltzmann(spec, i)
            if res.term is None:
                raise RuntimeError(
                    f"Boltzmann rejection budget exhausted after {res.attempts} attempts"
                )
            t = res.term
        st = term_stats(t)
        for arr, profile in (
            (agg.depth_totals, st.profile_by_depth),
            (agg.unary_totals, st.profile_by_unary_level),
        ):
            while len(arr) < len(profile):
                arr.append(0)
            for level, cnt in enumerate(profile):
                arr[level] += cnt
    return agg
