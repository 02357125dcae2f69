"""Exact coefficient tables for every family.

Every generating-function specification is run as a truncated-series
dynamic program over arbitrary-precision integers.  Convolutions are the
naive O(N^2) kind; table sizes are desk scale.

Row indexing per family (sizes run 1..N, index 0 of each row unused):

* ``lambda-all``             rows keyed by context depth d (free leaves may
                             take one of d values); closed counts are row 0.
                             Rows form the triangle d + n <= N.
* ``lambda-unary-height(k)`` rows keyed by used unary depth i = 0..k;
                             leaf weight i, unary step i -> i+1 while i < k.
* ``lambda-binding-length(k)`` same but the unary step saturates at k.
* ``lambda-exact-unary(q)``  rows keyed by (remaining unary budget l,
                             binder context m), l + m <= q; a leaf (weight
                             m) is allowed only at l = 0, a unary node
                             moves (l, m) -> (l-1, m+1), a binary node
                             splits the remaining budget.
* ``motzkin``                single row 0.
* ``motzkin-exact-unary(q)`` rows keyed by unary budget l = 0..q.
* ``motzkin-height-*(k)``    rows keyed by used unary height i = 0..k.
"""

from __future__ import annotations

import gzip
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import CorruptTableError, ResourceLimitError
from .terms import Family, Kind

FORMAT_VERSION = 1
DEFAULT_MAX_SIZE = 5000


@dataclass
class CountTable:
    """Per-family exact counts, indexed by (auxiliary row key, size)."""

    family: Family
    max_size: int
    rows: dict
    closed: list[int]
    note: str = ""

    def counts(self, aux=None) -> list[int]:
        if aux is None:
            return self.closed
        return self.rows[aux]

    def count(self, n: int, aux=None) -> int:
        row = self.counts(aux)
        if not 1 <= n <= self.max_size:
            raise IndexError(f"size {n} outside 1..{self.max_size}")
        return row[n] if n < len(row) else 0


def _new_row(n: int) -> list[int]:
    return [0] * (n + 1)


def _conv(a: list[int], b: list[int], m: int) -> int:
    """sum_{x=1}^{m-1} a[x] * b[m-x] with missing entries = 0."""
    if m < 2:
        return 0
    if a is b:
        total = 0
        half = (m - 1) // 2
        for x in range(1, half + 1):
            if x < len(a) and m - x < len(a):
                total += a[x] * a[m - x]
        total *= 2
        if m % 2 == 0:
            x = m // 2
            if x < len(a):
                total += a[x] * a[x]
        return total
    total = 0
    for x in range(1, m):
        if x < len(a) and m - x < len(b):
            total += a[x] * b[m - x]
    return total


def _check_limit(n: int, limit: int) -> None:
    if n < 1:
        raise ValueError("max size must be >= 1")
    if n > limit:
        raise ResourceLimitError(f"table size {n} exceeds limit {limit}")


# ---------------------------------------------------------------------------
# per-family builders


def count_lambda_all(max_size: int, *, limit: int = DEFAULT_MAX_SIZE) -> CountTable:
    """Closed-term table t[d][n] via t[d][1] = d and
    t[d][n] = t[d+1][n-1] + sum_a t[d][a] t[d][n-1-a].

    Only the triangle d + n <= N is populated (row d = N keeps its size-1
    entry): each context shift costs one size unit, so deeper rows cannot
    influence the closed counts.
    """
    _check_limit(max_size, limit)
    n = max_size
    rows: dict[int, list[int]] = {}
    for d in range(n, -1, -1):
        top = max(1, n - d)
        row = _new_row(top)
        row[1] = d
        above = rows.get(d + 1)
        for m in range(2, top + 1):
            total = _conv(row, row, m - 1)
            if above is not None and m - 1 < len(above):
                total += above[m - 1]
            row[m] = total
        rows[d] = row
    closed = rows[0]
    return CountTable(Family.lambda_all(), max_size, rows, closed)


def _motzkin_row(max_size: int) -> list[int]:
    row = _new_row(max_size)
    row[1] = 1
    for m in range(2, max_size + 1):
        row[m] = row[m - 1] + _conv(row, row, m - 1)
    return row


def _catalan_row(max_size: int, colors: int = 1) -> list[int]:
    """Binary trees with `colors`-colored leaves, counted by node count."""
    row = _new_row(max_size)
    row[1] = colors
    for m in range(2, max_size + 1):
        row[m] = _conv(row, row, m - 1)
    return row


def _motzkin_exact_unary_rows(q: int, max_size: int) -> dict[int, list[int]]:
    """M_l rows: M_0 = binary trees, M_l = U x M_{l-1} + sum_j A x M_j x M_{l-j}."""
    rows = {0: _catalan_row(max_size)}
    for l in range(1, q + 1):
        rows[l] = _new_row(max_size)
    for l in range(1, q + 1):
        row = rows[l]
        for m in range(2, max_size + 1):
            total = rows[l - 1][m - 1]
            for j in range(0, l // 2 + 1):
                other = l - j
                if j == other:
                    total += _conv(rows[j], rows[j], m - 1)
                else:
                    total += 2 * _conv(rows[j], rows[other], m - 1)
            row[m] = total
    return rows


def _height_rows(k: int, max_size: int, *, exact: bool, leaf_weight_all: int = 1) -> dict[int, list[int]]:
    """Rows i = used unary height.  Leaf allowed everywhere (at-most) or
    only at i = k (exact); unary step i -> i+1 while i < k."""
    rows = {i: _new_row(max_size) for i in range(k + 1)}
    for i in range(k, -1, -1):
        row = rows[i]
        row[1] = (leaf_weight_all if (not exact or i == k) else 0)
        above = rows.get(i + 1)
        for m in range(2, max_size + 1):
            total = _conv(row, row, m - 1)
            if above is not None:
                total += above[m - 1]
            row[m] = total
    return rows


def _lambda_height_rows(k: int, max_size: int, *, saturate: bool) -> dict[int, list[int]]:
    """Rows i = 0..k with leaf weight i.

    ``saturate=False``: unary step only while i < k (bounded unary height).
    ``saturate=True``: unary step i -> min(i+1, k) (bounded binding length).
    """
    rows = {i: _new_row(max_size) for i in range(k + 1)}
    for i in range(k, -1, -1):
        row = rows[i]
        row[1] = i
        if i < k:
            above = rows[i + 1]
        else:
            above = rows[k] if saturate else None
        for m in range(2, max_size + 1):
            total = _conv(row, row, m - 1)
            if above is not None:
                total += above[m - 1]
            row[m] = total
    return rows


def _exact_unary_rows(q: int, max_size: int) -> dict[tuple[int, int], list[int]]:
    """s[(l, m)] = terms with l unary nodes left to place and m binder
    colors available; leaf weight m, unary (l, m) -> (l-1, m+1), binary
    splits the budget.  States satisfy l + m <= q."""
    rows = {
        (l, m): _new_row(max_size)
        for l in range(q + 1)
        for m in range(q + 1 - l)
    }
    for (l, m), row in rows.items():
        if l == 0:  # a leaf spends no unary budget, so it closes a branch
            row[1] = m
    for n in range(2, max_size + 1):
        for (l, m), row in rows.items():
            total = 0
            if l >= 1:
                total += rows[(l - 1, m + 1)][n - 1]
            for j in range(0, l // 2 + 1):
                other = l - j
                if j == other:
                    total += _conv(rows[(j, m)], rows[(j, m)], n - 1)
                else:
                    total += 2 * _conv(rows[(j, m)], rows[(other, m)], n - 1)
            row[n] = total
    return rows


def count_family(fam: Family, max_size: int, *, limit: int = DEFAULT_MAX_SIZE) -> CountTable:
    """Exact counts for `fam` up to `max_size`.

    Height and binding-length restrictions with k >= N - 1 are vacuous for
    sizes <= N; those tables are built from the unrestricted program and
    carry a note saying so.
    """
    _check_limit(max_size, limit)
    kind, p, n = fam.kind, fam.param, max_size

    if kind == Kind.LAMBDA_ALL:
        t = count_lambda_all(n, limit=limit)
        return CountTable(fam, n, t.rows, t.closed)

    if kind == Kind.MOTZKIN:
        row = _motzkin_row(n)
        return CountTable(fam, n, {0: row}, row)

    if kind == Kind.MOTZKIN_EXACT_UNARY:
        if p > n - 1:  # a tree with p unary nodes has size >= p + 1
            note = f"unary budget {p} exceeds max size; counts are all zero"
            rows = {p: _new_row(n)}
            return CountTable(fam, n, rows, rows[p], note)
        rows = _motzkin_exact_unary_rows(p, n)
        return CountTable(fam, n, rows, rows[p])

    if kind == Kind.MOTZKIN_HEIGHT_EXACT:
        if p > n - 1:
            note = f"height {p} unreachable at sizes <= {n}; counts are all zero"
            rows = {0: _new_row(n)}
            return CountTable(fam, n, rows, rows[0], note)
        rows = _height_rows(p, n, exact=True)
        return CountTable(fam, n, rows, rows[0])

    if kind == Kind.MOTZKIN_HEIGHT_AT_MOST:
        note = ""
        k = p
        if k >= n - 1 and k > 0:
            k = max(1, n - 1)
            note = f"height bound {p} is vacuous at sizes <= {n}; built with k = {k}"
        rows = _height_rows(k, n, exact=False)
        return CountTable(fam, n, rows, rows[0], note)

    if kind == Kind.LAMBDA_UNARY_HEIGHT or kind == Kind.LAMBDA_BINDING_LENGTH:
        note = ""
        k = p
        if k >= n - 1 and k > 0:
            # any term of size <= n has unary height (hence every binding
            # length) <= n - 1 <= k: fall back to the unrestricted program
            t = count_lambda_all(n, limit=limit)
            note = f"bound {p} is vacuous at sizes <= {n}; unrestricted counts"
            return CountTable(fam, n, t.rows, t.closed, note)
        rows = _lambda_height_rows(k, n, saturate=(kind == Kind.LAMBDA_BINDING_LENGTH))
        return CountTable(fam, n, rows, rows[0], note)

    if kind == Kind.LAMBDA_EXACT_UNARY:
        if p > n - 1:
            note = f"unary budget {p} exceeds max size; counts are all zero"
            rows = {(p, 0): _new_row(n)}
            return CountTable(fam, n, rows, rows[(p, 0)], note)
        rows = _exact_unary_rows(p, n)
        return CountTable(fam, n, rows, rows[(p, 0)])

    if kind == Kind.LAMBDA_AT_MOST_UNARY:
        q = min(p, n - 1)
        note = "" if q == p else f"budget {p} capped at {q}: larger budgets never fit"
        rows = _exact_unary_rows(q, n)
        closed = _new_row(n)
        for l in range(q + 1):
            row = rows[(l, 0)]
            for m in range(1, n + 1):
                closed[m] += row[m]
        return CountTable(fam, n, rows, closed, note)

    raise ValueError(f"unhandled family {fam}")  # pragma: no cover


# ---------------------------------------------------------------------------
# P_q polynomials (fixed-unary Motzkin numerators)


@dataclass(frozen=True)
class PqPolynomial:
    q: int
    coefficients: tuple[int, ...]

    def __call__(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def pq_polynomial(q: int) -> PqPolynomial:
    """P_2 = 1, P_q = P_{q-1} + z * sum_{l=2}^{q-2} P_l P_{q-l}."""
    if q < 2:
        raise ValueError("P_q is defined for q >= 2")
    polys: dict[int, list[int]] = {2: [1]}
    for r in range(3, q + 1):
        acc = list(polys[r - 1])
        for l in range(2, r - 1):
            prod = _poly_mul(polys[l], polys[r - l])
            for i, c in enumerate(prod):
                idx = i + 1  # the extra factor z
                while len(acc) <= idx:
                    acc.append(0)
                acc[idx] += c
        polys[r] = acc
    return PqPolynomial(q, tuple(polys[q]))


def motzkin_exact_unary_series_via_pq(q: int, max_size: int) -> list[int]:
    """Coefficients of z^{q+1} P_q(z^2) / (1 - 4 z^2)^{q - 1/2}, the closed
    representation of the exactly-q-unary Motzkin counts (q >= 2).

    Exact rational series expansion; an independent route used to
    cross-check the dynamic program.
    """
    if q < 2:
        raise ValueError("representation holds for q >= 2")
    halves = max_size // 2 + 1
    # (1 - u)^{-s} with s = q - 1/2: sum_m binom(s + m - 1, m) u^m
    s = Fraction(2 * q - 1, 2)
    binom = [Fraction(1)]
    for m in range(1, halves):
        binom.append(binom[-1] * (s + m - 1) / m)
    pq = pq_polynomial(q)
    series_u = [Fraction(0)] * halves  # series in u = z^2
    for i, c in enumerate(pq.coefficients):
        if c:
            for m in range(0, halves - i):
                series_u[i + m] += c * binom[m] * 4**m
    out = [0] * (max_size + 1)
    for j, val in enumerate(series_u):
        n = q + 1 + 2 * j
        if n <= max_size:
            if val.denominator != 1:
                raise ArithmeticError("series expansion must be integral")
            out[n] = int(val)
    return out


# ---------------------------------------------------------------------------
# persistence


def _aux_to_str(aux) -> str:
    if isinstance(aux, tuple):
        return ",".join(str(x) for x in aux)
    return str(aux)


def _aux_from_str(text: str):
    if "," in text:
        return tuple(int(x) for x in text.split(","))
    return int(text)


def save_table(table: CountTable, path) -> None:
    """Lossless JSON dump; integers as decimal strings; gzip iff *.gz."""
    doc = {
        "version": FORMAT_VERSION,
        "family": table.family.label(),
        "max_size": table.max_size,
        "note": table.note,
        "rows": [
            {"aux": _aux_to_str(aux), "counts": [str(v) for v in row]}
            for aux, row in sorted(table.rows.items(), key=lambda kv: _aux_to_str(kv[0]))
        ],
        "closed": [str(v) for v in table.closed],
    }
    data = json.dumps(doc).encode()
    path = Path(path)
    if path.suffix == ".gz":
        path.write_bytes(gzip.compress(data))
    else:
        path.write_bytes(data)


def load_table(path) -> CountTable:
    path = Path(path)
    raw = path.read_bytes()
    if path.suffix == ".gz":
        try:
            raw = gzip.decompress(raw)
        except OSError as e:
            raise CorruptTableError(f"not a gzip file: {e}") from e
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as e:
        raise CorruptTableError(f"invalid JSON: {e.msg}") from e
    for key in ("version", "family", "max_size", "rows", "closed"):
        if key not in doc:
            raise CorruptTableError(f"missing field {key!r}")
    if doc["version"] != FORMAT_VERSION:
        raise CorruptTableError(
            f"format version {doc['version']} unsupported (want {FORMAT_VERSION})"
        )
    try:
        family = Family.from_label(doc["family"])
        rows = {
            _aux_from_str(entry["aux"]): [int(v) for v in entry["counts"]]
            for entry in doc["rows"]
        }
        closed = [int(v) for v in doc["closed"]]
    except (KeyError, ValueError) as e:
        raise CorruptTableError(f"malformed table payload: {e}") from e
    table = CountTable(family, int(doc["max_size"]), rows, closed, doc.get("note", ""))
    if len(closed) < min(table.max_size + 1, 2):
        raise CorruptTableError("closed series shorter than declared size")
    return table


def export_csv(table: CountTable) -> str:
    """Closed series as `family,params,n,count` rows."""
    fam = table.family
    params = "" if fam.param is None else str(fam.param)
    lines = ["family,params,n,count"]
    for n in range(1, table.max_size + 1):
        c = table.closed[n] if n < len(table.closed) else 0
        lines.append(f"{fam.kind},{params},{n},{c}")
    return "\n".join(lines) + "\n"
