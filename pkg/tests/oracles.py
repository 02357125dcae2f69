"""Independent brute-force oracles.

Counting here never touches the dynamic programs under test: terms are
produced by enumerating Motzkin skeletons and then taking the cartesian
product of per-leaf binder choices, and family membership is decided by
the validator.  Exact power series come from rational arithmetic on the
closed-form generating functions.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import product

from lamenum.terms import Binary, Family, Leaf, Term, Unary, validate


@lru_cache(maxsize=None)
def motzkin_skeletons(n: int) -> tuple[Term, ...]:
    """All Motzkin trees with n nodes (leaves free).  Subtrees are shared;
    callers must not mutate (terms are frozen anyway)."""
    if n < 1:
        return ()
    if n == 1:
        return (Leaf(),)
    out: list[Term] = [Unary(t) for t in motzkin_skeletons(n - 1)]
    for a in range(1, n - 1):
        for left in motzkin_skeletons(a):
            for right in motzkin_skeletons(n - 1 - a):
                out.append(Binary(left, right))
    return tuple(out)


def _leaf_ancestor_counts(t: Term) -> list[int]:
    """Unary-ancestor count per leaf, in left-to-right order."""
    counts: list[int] = []
    stack = [(t, 0)]
    while stack:
        node, u = stack.pop()
        if isinstance(node, Leaf):
            counts.append(u)
        elif isinstance(node, Unary):
            stack.append((node.child, u + 1))
        else:  # right pushed first so the left leaf pops first
            stack.append((node.right, u))
            stack.append((node.left, u))
    return counts


def _assign(t: Term, indices: list[int], pos: list[int]) -> Term:
    if isinstance(t, Leaf):
        i = pos[0]
        pos[0] += 1
        return Leaf(indices[i])
    if isinstance(t, Unary):
        return Unary(_assign(t.child, indices, pos))
    return Binary(_assign(t.left, indices, pos), _assign(t.right, indices, pos))


@lru_cache(maxsize=None)
def closed_terms(n: int) -> tuple[Term, ...]:
    """Every closed lambda-term of size n: all binder assignments over all
    skeletons, leaves taking any enclosing abstraction."""
    out: list[Term] = []
    for skel in motzkin_skeletons(n):
        counts = _leaf_ancestor_counts(skel)
        if any(c == 0 for c in counts):
            continue
        for combo in product(*(range(1, c + 1) for c in counts)):
            out.append(_assign(skel, list(combo), [0]))
    return tuple(out)


def count_by_validator(fam: Family, n: int) -> int:
    pool = motzkin_skeletons(n) if fam.is_motzkin else closed_terms(n)
    return sum(1 for t in pool if validate(t, fam))


# ---------------------------------------------------------------------------
# exact series from closed forms


def series_sqrt(s: list[Fraction], n_terms: int) -> list[Fraction]:
    """t with t^2 = s (s[0] = 1), via t_n = (s_n - sum t_j t_{n-j}) / (2 t_0)."""
    assert s[0] == 1
    t = [Fraction(1)] + [Fraction(0)] * (n_terms - 1)
    for n in range(1, n_terms):
        acc = s[n] if n < len(s) else Fraction(0)
        for j in range(1, n):
            acc -= t[j] * t[n - j]
        t[n] = acc / 2
    return t


def motzkin_series(n_max: int) -> list[int]:
    """[z^n] (1 - z - sqrt(1 - 2z - 3z^2)) / (2z) for n = 0..n_max."""
    root = series_sqrt(
        [Fraction(1), Fraction(-2), Fraction(-3)] + [Fraction(0)] * n_max, n_max + 2
    )
    out = []
    for n in range(n_max + 1):
        # [z^n] M = [z^{n+1}] (1 - z - root) / 2
        val = (-(Fraction(1) if n + 1 == 1 else Fraction(0)) - root[n + 1]) / 2
        assert val.denominator == 1
        out.append(int(val))
    return out


def catalan(m: int) -> int:
    return math.comb(2 * m, m) // (m + 1)


def chi_square_p_value(observed: dict, expected_total: int, cells: int) -> float:
    """Upper-tail p of the chi-square statistic against the uniform law
    over `cells` outcomes; regularized incomplete gamma via mpmath."""
    import mpmath

    expected = expected_total / cells
    stat = 0.0
    seen = 0
    for _, cnt in observed.items():
        stat += (cnt - expected) ** 2 / expected
        seen += 1
    stat += (cells - seen) * expected  # unobserved cells
    dof = cells - 1
    return float(mpmath.gammainc(dof / 2, stat / 2, mpmath.inf, regularized=True))
