"""Nested-radical generating functions: singularity location, type and
asymptotic constants.

Each bounded-height or bounded-binding family has a generating function

    F(z) = (1 - alpha*z - sqrt(R_K(z))) / (beta*z)

where the radicands nest as R_i(z) = p_i(z) + q_i(z) * sqrt(R_{i-1}(z)),
innermost first.  The dominant singularity rho is where the chain first
stops being defined-and-positive on the real axis; the block of radicands
vanishing together at rho fixes the singularity type theta = 2^-m, and a
local expansion R(rho - eps) ~ a + b * eps^theta propagated outwards gives
the multiplicative constant.

All reals are mpmath floats at a configurable binary precision (default
256 bits); constants of magnitude 10^-157 are reported in log10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
from mpmath import mp, mpf

from .errors import (
    PrecisionError,
    ResourceLimitError,
    SingularitySearchError,
    UnsupportedFamilyError,
)
from .terms import Family, Kind

DEFAULT_PREC = 256
MAX_CHAIN_DEPTH = 500_000

_CHAIN_KINDS = {
    Kind.LAMBDA_UNARY_HEIGHT,
    Kind.LAMBDA_BINDING_LENGTH,
    Kind.MOTZKIN_HEIGHT_EXACT,
    Kind.MOTZKIN_HEIGHT_AT_MOST,
}


# ---------------------------------------------------------------------------
# integer and real sequences


def seq_u(j: int) -> int:
    """u_0 = 0, u_{i+1} = u_i^2 + i + 1."""
    if j < 0:
        raise ValueError("index must be >= 0")
    u = 0
    for i in range(j):
        u = u * u + i + 1
    return u


def seq_alpha(j: int) -> int:
    """alpha_0 = 0, alpha_p = (alpha_{p-1} + p)^2; equals u_p^2."""
    if j < 0:
        raise ValueError("index must be >= 0")
    a = 0
    for p in range(1, j + 1):
        a = (a + p) ** 2
    return a


def seq_big_n(j: int) -> int:
    """N_j = u_j^2 - u_j + j (= alpha_j - alpha_{j-1} for j >= 1)."""
    u = seq_u(j)
    return u * u - u + j


def seq_lambda(ell: int, prec: int = DEFAULT_PREC) -> mpf:
    """lambda_0 = 0, lambda_{l+1} = l + 1 + sqrt(lambda_l)."""
    if ell < 0:
        raise ValueError("index must be >= 0")
    with mp.workprec(prec):
        lam = mpf(0)
        for l in range(ell):
            lam = l + 1 + mpmath.sqrt(lam)
        return lam


def seq_c(j: int, prec: int = DEFAULT_PREC) -> mpf:
    """c_1 = 1, c_j = 4j - 5 + 2 sqrt(c_{j-1})."""
    if j < 1:
        raise ValueError("index must be >= 1")
    with mp.workprec(prec):
        c = mpf(1)
        for i in range(2, j + 1):
            c = 4 * i - 5 + 2 * mpmath.sqrt(c)
        return c


def sequence(kind: str, j: int, prec: int = DEFAULT_PREC):
    dispatch = {
        "u": seq_u,
        "N": seq_big_n,
        "alpha": seq_alpha,
        "lambda": lambda i: seq_lambda(i, prec),
        "c": lambda i: seq_c(i, prec),
    }
    if kind not in dispatch:
        raise ValueError(f"unknown sequence {kind!r} (want u, N, alpha, lambda or c)")
    return dispatch[kind](j)


def unary_height_block_index(k: int) -> tuple[int, bool]:
    """The j with N_j <= k < N_{j+1}, and whether k == N_j exactly."""
    if k < 1:
        raise ValueError("k must be >= 1")
    j = 1
    while seq_big_n(j + 1) <= k:
        j += 1
    return j, seq_big_n(j) == k


def gamma_exact(j: int) -> Fraction:
    """-d/dz of the j-th radicand of the height-N_j chain at rho = 1/(2 u_j).

    Evaluated through the linear recurrence w_p = delta_p + eps_p * w_{p-1}
    with delta_p = -4 (N_j - p + 1)/u_j - 2 + 2 u_{j-p+1}/u_j and
    eps_p = 1/(2 u_{j-p+1}); all rational, so the result is exact.
    """
    if j < 1:
        raise ValueError("index must be >= 1")
    uj = seq_u(j)
    nj = seq_big_n(j)
    w = Fraction(-4 * nj, uj)
    for p in range(2, j + 1):
        u_inner = seq_u(j - p + 1)
        delta = Fraction(-4 * (nj - p + 1), uj) - 2 + Fraction(2 * u_inner, uj)
        eps = Fraction(1, 2 * u_inner)
        w = delta + eps * w
    return -w


# ---------------------------------------------------------------------------
# radicand chains


@dataclass(frozen=True)
class RadicalChain:
    """Levels 1..depth, innermost first; R_i = p_i + q_i sqrt(R_{i-1}).

    Level polynomials are degree <= 2 with integer coefficients, stored as
    (c0, c1, c2); q_1 is None.  The generating function is
    (1 - alpha*z - sqrt(R_depth)) / (beta*z).
    """

    family: Family
    depth: int
    wrapper: tuple[int, int]

    @classmethod
    def for_family(cls, fam: Family) -> "RadicalChain":
        if fam.kind not in _CHAIN_KINDS:
            raise UnsupportedFamilyError(f"{fam.label()} has no radical chain")
        k = fam.param
        return cls(fam, k + 1, (0, 2))

    def level(self, i: int) -> tuple[tuple[int, int, int], Optional[tuple[int, int, int]]]:
        """(p_i, q_i) coefficient triples; q_i is None at the innermost level."""
        if not 1 <= i <= self.depth:
            raise IndexError(f"level {i} outside 1..{self.depth}")
        k = self.family.param
        kind = self.family.kind
        q = None if i == 1 else (0, 2, 0)
        if kind == Kind.LAMBDA_UNARY_HEIGHT:
            p = (1, 0, -4 * k) if i == 1 else (1, -2, -4 * (k - i + 1))
        elif kind == Kind.LAMBDA_BINDING_LENGTH:
            if i == 1:
                p = (1, -2, 1 - 4 * k)
            elif i == 2:
                p = (1, -2, 2 - 4 * (k - 1))
            else:
                p = (1, -2, -4 * (k - i + 1))
        elif kind == Kind.MOTZKIN_HEIGHT_AT_MOST:
            p = (1, 0, -4) if i == 1 else (1, -2, -4)
        else:  # MOTZKIN_HEIGHT_EXACT
            p = (1, 0, -4) if i == 1 else (1, -2, 0)
        return p, q


def _poly_eval(coeffs: tuple[int, int, int], z: mpf) -> mpf:
    c0, c1, c2 = coeffs
    return c0 + z * (c1 + z * c2)


def _poly_deriv(coeffs: tuple[int, int, int], z: mpf) -> mpf:
    _, c1, c2 = coeffs
    return c1 + 2 * c2 * z


@dataclass
class ChainEval:
    """Radicand values innermost-out; evaluation stops at the first level
    whose inner square root does not exist."""

    values: list
    undefined_at: Optional[int]

    @property
    def defined(self) -> bool:
        return self.undefined_at is None


def eval_chain(chain: RadicalChain, z, prec: int = DEFAULT_PREC) -> ChainEval:
    if chain.depth > MAX_CHAIN_DEPTH:
        raise ResourceLimitError(
            f"chain depth {chain.depth} exceeds evaluation limit {MAX_CHAIN_DEPTH}"
        )
    with mp.workprec(prec):
        z = mpf(z)
        if z < 0:
            raise ValueError("chains are evaluated on z >= 0")
        values: list = []
        prev = None
        for i in range(1, chain.depth + 1):
            p, q = chain.level(i)
            if q is None:
                val = _poly_eval(p, z)
            else:
                if prev < 0:
                    return ChainEval(values, i)
                val = _poly_eval(p, z) + _poly_eval(q, z) * mpmath.sqrt(prev)
            values.append(val)
            prev = val
        return ChainEval(values, None)


def _chain_positive(chain: RadicalChain, z, prec: int) -> bool:
    ev = eval_chain(chain, z, prec)
    return ev.defined and all(v > 0 for v in ev.values)


def _bracket(chain: RadicalChain, prec: int) -> tuple[mpf, mpf]:
    k = chain.family.param
    if chain.family.is_lambda:
        lo = mpf(1) / (1 + 2 * mpmath.sqrt(k)) * (1 - mpf("1e-6"))
    else:
        lo = mpf(1) / 3 * (1 - mpf("1e-6"))
    return lo, mpf("0.5")


def find_rho(chain: RadicalChain, prec: int = DEFAULT_PREC) -> mpf:
    """Smallest z > 0 where the chain stops being defined with all
    radicands positive; bisection on that monotone predicate.

    Exact shortcuts: bounded unary height with k = N_j returns 1/(2 u_j);
    exact-height Motzkin chains always vanish at 1/2.
    """
    fam = chain.family
    with mp.workprec(prec):
        if fam.kind == Kind.LAMBDA_UNARY_HEIGHT:
            j, double = unary_height_block_index(fam.param)
            if double:
                return mpf(1) / (2 * seq_u(j))
        if fam.kind == Kind.MOTZKIN_HEIGHT_EXACT:
            return mpf("0.5")
        lo, hi = _bracket(chain, prec)
        if not _chain_positive(chain, lo, prec):
            raise SingularitySearchError(
                f"chain for {fam.label()} not positive at the lower bracket {lo}"
            )
        if _chain_positive(chain, hi, prec):
            raise SingularitySearchError(
                f"no singularity of {fam.label()} below the unrestricted bound 1/2"
            )
        # bisect past the vanishing tolerance so classification separates
        # zero from nonzero radicands cleanly
        width_goal = hi * mpf(2) ** -(3 * prec // 4)
        while hi - lo > width_goal:
            mid = (lo + hi) / 2
            if _chain_positive(chain, mid, prec):
                lo = mid
            else:
                hi = mid
        return lo


# ---------------------------------------------------------------------------
# classification


@dataclass
class SingularityReport:
    family: Family
    rho: mpf
    vanishing_block: tuple[int, ...]
    theta: Fraction
    constant_log10: Optional[mpf] = None
    subexp_exponent: Optional[Fraction] = None
    growth_log10: Optional[mpf] = None
    parity_note: str = ""

    @property
    def growth(self) -> mpf:
        return mpf(10) ** self.growth_log10

    @property
    def constant(self) -> mpf:
        return mpf(10) ** self.constant_log10

    def constant_mantissa(self) -> str:
        """12-significant-digit mantissa m with constant = m * 10^floor(log10)."""
        expo = mpmath.floor(self.constant_log10)
        mant = mpf(10) ** (self.constant_log10 - expo)
        return f"{mpmath.nstr(mant, 12)}e{int(expo):+d}"

    def to_json(self) -> dict:
        return {
            "version": 1,
            "family": self.family.kind,
            "params": self.family.param,
            "rho": mpmath.nstr(self.rho, 30),
            "theta": str(self.theta),
            "block": list(self.vanishing_block),
            "constant_log10": None
            if self.constant_log10 is None
            else mpmath.nstr(self.constant_log10, 20),
            "constant_mantissa": None
            if self.constant_log10 is None
            else self.constant_mantissa(),
            "subexp_exponent": None
            if self.subexp_exponent is None
            else str(self.subexp_exponent),
            "growth": None
            if self.growth_log10 is None
            else mpmath.nstr(mpf(10) ** self.growth_log10, 15),
            "parity_note": self.parity_note,
        }


def _vanish_tolerance(prec: int) -> mpf:
    return mpf(2) ** -(prec // 2)


def classify(chain: RadicalChain, prec: int = DEFAULT_PREC) -> SingularityReport:
    """Locate rho and the block of simultaneously vanishing radicands.

    Bounded unary height is classified exactly from k against the N_j
    sequence: the (j+1)-st radicand vanishes alone for N_j < k < N_{j+1},
    and radicands j, j+1 vanish together at k = N_j.  The numeric scan must
    agree or a precision error is raised.  Exact-height Motzkin chains
    vanish at every level.
    """
    fam = chain.family
    rho = find_rho(chain, prec)
    tol = _vanish_tolerance(prec)

    if fam.kind == Kind.MOTZKIN_HEIGHT_EXACT:
        block = tuple(range(1, chain.depth + 1))
        # rho = 1/2 is exactly representable: every radicand is exactly 0
        ev = eval_chain(chain, rho, prec)
        if not ev.defined or any(v != 0 for v in ev.values):
            raise PrecisionError("exact-height chain did not vanish at 1/2")
        return SingularityReport(fam, rho, block, Fraction(1, 2 ** len(block)))

    if fam.kind == Kind.LAMBDA_UNARY_HEIGHT:
        j, double = unary_height_block_index(fam.param)
        block = (j, j + 1) if double else (j + 1,)
        scan_prec = 3 * prec if double else prec
        with mp.workprec(scan_prec):
            if double:
                # stay on the defined side: 1/(2 u_j) may round upward
                rho_scan = mpf(1) / (2 * seq_u(j)) * (1 - mpf(2) ** (4 - scan_prec))
            else:
                rho_scan = mpf(rho)
            ev = eval_chain(chain, rho_scan, scan_prec)
            if not ev.defined:
                raise PrecisionError("chain undefined at its own singularity")
            numeric = tuple(
                i + 1 for i, v in enumerate(ev.values) if abs(v) < tol
            )
        if numeric != block:
            raise PrecisionError(
                f"numeric vanishing block {numeric} disagrees with integer "
                f"classification {block} for {fam.label()}; raise the precision"
            )
        return SingularityReport(fam, rho, block, Fraction(1, 2 ** len(block)))

    ev = eval_chain(chain, rho, prec)
    if not ev.defined:
        raise PrecisionError("chain undefined at the bisection point")
    block = tuple(i + 1 for i, v in enumerate(ev.values) if abs(v) < tol)
    if not block or block != tuple(range(block[0], block[-1] + 1)):
        raise PrecisionError(
            f"vanishing block {block} empty or not consecutive for {fam.label()}"
        )
    return SingularityReport(fam, rho, block, Fraction(1, 2 ** len(block)))


# ---------------------------------------------------------------------------
# local expansion


@dataclass(frozen=True)
class LocalExpansion:
    """R(rho - eps) = a + b * eps^theta + lower order; a = 0 on the block."""

    a: mpf
    b: mpf
    theta: Fraction


def local_expansion_states(
    chain: RadicalChain,
    report: Optional[SingularityReport] = None,
    prec: int = DEFAULT_PREC,
) -> list:
    """Per-level expansion states at rho.

    Below the block: ("analytic", value, derivative) with exact derivative
    propagation R'_i = p'_i + q'_i sqrt(R_{i-1}) + q_i R'_{i-1}/(2 sqrt(R_{i-1})).
    From the block outwards: ("singular", a, b, theta) where a is snapped
    to exact zero on block levels (alarm if it is not already tiny).
    """
    if report is None:
        report = classify(chain, prec)
    block = report.vanishing_block
    b0, b1 = block[0], block[-1]
    work = 3 * prec if len(block) > 1 else 2 * prec
    with mp.workprec(work):
        if chain.family.kind == Kind.LAMBDA_UNARY_HEIGHT and len(block) == 2:
            rho = mpf(1) / (2 * seq_u(block[0]))  # exact double root
        else:
            rho = mpf(report.rho)
        states: list = []
        value = None
        deriv = None
        snap_tol = _vanish_tolerance(prec)
        for i in range(1, b0):
            p, q = chain.level(i)
            if q is None:
                value, deriv = _poly_eval(p, rho), _poly_deriv(p, rho)
            else:
                root = mpmath.sqrt(value)
                new_value = _poly_eval(p, rho) + _poly_eval(q, rho) * root
                deriv = (
                    _poly_deriv(p, rho)
                    + _poly_deriv(q, rho) * root
                    + _poly_eval(q, rho) * deriv / (2 * root)
                )
                value = new_value
            states.append(("analytic", value, deriv))
        # first vanishing level: gamma = -R'(rho) from one more derivative step
        p, q = chain.level(b0)
        if q is None:
            gamma = -_poly_deriv(p, rho)
        else:
            root = mpmath.sqrt(value)
            gamma = -(
                _poly_deriv(p, rho)
                + _poly_deriv(q, rho) * root
                + _poly_eval(q, rho) * deriv / (2 * root)
            )
        if gamma <= 0:
            raise PrecisionError("vanishing radicand has nonpositive slope")
        a, b, theta = mpf(0), gamma, Fraction(1)
        states.append(("singular", a, b, theta))
        for i in range(b0 + 1, chain.depth + 1):
            p, q = chain.level(i)
            qv = _poly_eval(q, rho)
            if a == 0:
                new_a = _poly_eval(p, rho)
                new_b = qv * mpmath.sqrt(b)
                theta = theta / 2
                if i <= b1:
                    if abs(new_a) > snap_tol:
                        raise PrecisionError(
                            f"level {i} in the vanishing block has |a| = {new_a}"
                        )
                    new_a = mpf(0)
                a, b = new_a, new_b
            else:
                root = mpmath.sqrt(a)
                a, b = _poly_eval(p, rho) + qv * root, qv * b / (2 * root)
            states.append(("singular", a, b, theta))
        return states


def local_expansion(
    chain: RadicalChain,
    report: Optional[SingularityReport] = None,
    prec: int = DEFAULT_PREC,
) -> LocalExpansion:
    state = local_expansion_states(chain, report, prec)[-1]
    _, a, b, theta = state
    return LocalExpansion(a, b, theta)


# ---------------------------------------------------------------------------
# asymptotic constants


def _pipeline_report(fam: Family, prec: int) -> SingularityReport:
    """count(n) ~ h n^(-1-theta) rho^(-n) through the numeric expansion.

    The wrapper (1 - alpha z - sqrt(R_K))/(beta z) turns the outer state
    (a, b, theta) into the coefficient c of (1 - z/rho)^theta_F; the
    constant is h = c / Gamma(-theta_F).
    """
    chain = RadicalChain.for_family(fam)
    report = classify(chain, prec)
    with mp.workprec(2 * prec):
        exp = local_expansion(chain, report, prec)
        rho = mpf(report.rho)
        _, beta = chain.wrapper
        if exp.a == 0:
            theta_f = exp.theta / 2
            c = -mpmath.sqrt(exp.b) * rho ** (exp.theta / 2) / (beta * rho)
        else:
            theta_f = exp.theta
            c = -exp.b * rho**exp.theta / (2 * mpmath.sqrt(exp.a) * beta * rho)
        h = c / mpmath.gamma(-mpf(theta_f.numerator) / theta_f.denominator)
        if h <= 0:
            raise PrecisionError("asymptotic constant must be positive")
        report.constant_log10 = mpmath.log10(h)
        report.subexp_exponent = -1 - theta_f
        report.growth_log10 = -mpmath.log10(rho)
        report.theta = theta_f
    return report


def _lambda_product_log(count: int, prec: int, direct_cutoff: int = 10**6):
    """log of prod_{i=1..count} lambda_i.

    Direct summation below the cutoff.  Past it, the product follows the
    asymptotic shape log-prod ~ const + F(M) with
    F(M) = log(M)/2 + M (log M - 1) + 2 sqrt(M); the constant is
    eliminated by anchoring at the cutoff:
    log prod(count) = log prod(cutoff) + F(count) - F(cutoff) + O(1/sqrt(cutoff)).
    The anchor sum runs in machine floats: its rounding (~1e-9) is far
    below the O(1/sqrt(cutoff)) method error, itself negligible against
    log-products of magnitude 1e7 and up.
    """
    with mp.workprec(prec):
        if count <= direct_cutoff:
            lam = mpf(0)
            total = mpf(0)
            for l in range(count):
                lam = l + 1 + mpmath.sqrt(lam)
                total += mpmath.log(lam)
            return total

        def shape(m_int: int) -> mpf:
            m = mpf(m_int)
            return mpmath.log(m) / 2 + m * (mpmath.log(m) - 1) + 2 * mpmath.sqrt(m)

        lam_f = 0.0
        anchor = 0.0
        for l in range(direct_cutoff):
            lam_f = l + 1 + math.sqrt(lam_f)
            anchor += math.log(lam_f)
        return mpf(anchor) + shape(count) - shape(direct_cutoff)


def _unary_height_closed_report(j: int, prec: int) -> SingularityReport:
    """h_{N_j} = gamma_j^{1/4} (2 u_j)^{1/4} /
    (2^{N_j - j + 2} sqrt(2) Gamma(3/4) sqrt(prod_{i<=N_j-j} lambda_i))."""
    uj = seq_u(j)
    nj = seq_big_n(j)
    fam = Family.lambda_unary_height(nj)
    with mp.workprec(2 * prec):
        gamma = gamma_exact(j)
        gamma_mp = mpf(gamma.numerator) / gamma.denominator
        log_h = (
            (mpmath.log(gamma_mp) + mpmath.log(2 * uj)) / 4
            - (nj - j + 2) * mpmath.log(2)
            - mpmath.log(2) / 2
            - mpmath.log(mpmath.gamma(mpf(3) / 4))
            - _lambda_product_log(nj - j, 2 * prec) / 2
        )
        rho = mpf(1) / (2 * uj)
        return SingularityReport(
            family=fam,
            rho=rho,
            vanishing_block=(j, j + 1),
            theta=Fraction(1, 4),
            constant_log10=log_h / mpmath.log(10),
            subexp_exponent=Fraction(-5, 4),
            growth_log10=mpmath.log10(2 * uj),
        )


def _binding_length_closed_report(k: int, prec: int) -> SingularityReport:
    """h = sqrt((2k + sqrt(k)) / (4 pi prod_{j=2..k+1} c_j)), in log space."""
    fam = Family.lambda_binding_length(k)
    with mp.workprec(2 * prec):
        log_prod = mpf(0)
        c = mpf(1)
        for i in range(2, k + 2):
            c = 4 * i - 5 + 2 * mpmath.sqrt(c)
            log_prod += mpmath.log(c)
        sk = mpmath.sqrt(mpf(k))
        log_h = (mpmath.log(2 * k + sk) - mpmath.log(4 * mpmath.pi) - log_prod) / 2
        rho = mpf(1) / (1 + 2 * sk)
        return SingularityReport(
            family=fam,
            rho=rho,
            vanishing_block=(1,),
            theta=Fraction(1, 2),
            constant_log10=log_h / mpmath.log(10),
            subexp_exponent=Fraction(-3, 2),
            growth_log10=mpmath.log10(1 + 2 * sk),
        )


def _catalan_report(fam: Family, prec: int) -> SingularityReport:
    # binary-tree families: both +-1/2 are type-1/2 singularities, so the
    # admissible (odd) sizes carry twice the one-singularity constant
    with mp.workprec(2 * prec):
        h = mpmath.sqrt(2 / mpmath.pi)
        return SingularityReport(
            family=fam,
            rho=mpf("0.5"),
            vanishing_block=(1,),
            theta=Fraction(1, 2),
            constant_log10=mpmath.log10(h),
            subexp_exponent=Fraction(-3, 2),
            growth_log10=mpmath.log10(2),
            parity_note="even sizes are empty; constant holds on odd sizes",
        )


def asym_constant(fam: Family, prec: int = DEFAULT_PREC, method: str = "auto") -> SingularityReport:
    """Complete singularity report with the constant h such that
    count(n) ~ h * n^(subexp) * growth^n on the admissible sizes.

    method="pipeline" forces the numeric local-expansion route on chain
    families (used to cross-check the closed forms).
    """
    kind, p = fam.kind, fam.param

    if kind == Kind.LAMBDA_ALL:
        raise UnsupportedFamilyError(
            "lambda-all has radius of convergence 0 (rho = 0): no power-law asymptotics"
        )
    if kind == Kind.LAMBDA_AT_MOST_UNARY:
        raise UnsupportedFamilyError(
            "lambda-at-most-unary: the exact-unary top stratum dominates; "
            "use lambda-exact-unary for the admissible parity"
        )

    if kind == Kind.MOTZKIN:
        with mp.workprec(2 * prec):
            h = mpmath.sqrt(3) / (2 * mpmath.sqrt(mpmath.pi))
            return SingularityReport(
                family=fam,
                rho=mpf(1) / 3,
                vanishing_block=(1,),
                theta=Fraction(1, 2),
                constant_log10=mpmath.log10(h),
                subexp_exponent=Fraction(-3, 2),
                growth_log10=mpmath.log10(3),
            )

    if kind == Kind.LAMBDA_EXACT_UNARY:
        if p < 1:
            raise UnsupportedFamilyError("no closed terms without abstractions")
        with mp.workprec(2 * prec):
            log_h = (
                mpmath.log(2) / 2
                - p * mpmath.log(2)
                - mpmath.log(mpmath.factorial(p - 1)) / 2
                - mpmath.log(mpmath.pi) / 2
            )
            growth = 2 * mpmath.sqrt(mpf(p))
            return SingularityReport(
                family=fam,
                rho=1 / growth,
                vanishing_block=(),
                theta=Fraction(1, 2),
                constant_log10=log_h / mpmath.log(10),
                subexp_exponent=Fraction(-3, 2),
                growth_log10=mpmath.log10(growth),
                parity_note=f"sizes with n = {p} (mod 2) are empty",
            )

    if kind == Kind.MOTZKIN_EXACT_UNARY:
        with mp.workprec(2 * prec):
            log_h = (
                (mpmath.log(2) - mpmath.log(mpmath.pi)) / 2
                - p * mpmath.log(2)
                - mpmath.log(mpmath.factorial(p))
            )
            return SingularityReport(
                family=fam,
                rho=mpf("0.5"),
                vanishing_block=(),
                theta=Fraction(1, 2) - p,
                constant_log10=log_h / mpmath.log(10),
                subexp_exponent=p - Fraction(3, 2),
                growth_log10=mpmath.log10(2),
                parity_note=f"sizes with n = {p} (mod 2) are empty",
            )

    if kind == Kind.MOTZKIN_HEIGHT_EXACT:
        if p == 0:
            return _catalan_report(fam, prec)
        if method == "pipeline":
            return _pipeline_report(fam, prec)
        with mp.workprec(2 * prec):
            alpha = Fraction(1, 2 ** (p + 1))
            alpha_mp = mpf(alpha.numerator) / alpha.denominator
            h = -(mpf(2) ** alpha_mp) / mpmath.gamma(-alpha_mp)
            return SingularityReport(
                family=fam,
                rho=mpf("0.5"),
                vanishing_block=tuple(range(1, p + 2)),
                theta=alpha,
                constant_log10=mpmath.log10(h),
                subexp_exponent=-1 - alpha,
                growth_log10=mpmath.log10(2),
            )

    if kind == Kind.MOTZKIN_HEIGHT_AT_MOST:
        if p == 0:
            return _catalan_report(fam, prec)
        return _pipeline_report(fam, prec)

    if kind == Kind.LAMBDA_UNARY_HEIGHT:
        if p < 1:
            raise UnsupportedFamilyError("no closed terms without abstractions")
        j, double = unary_height_block_index(p)
        if double and method != "pipeline":
            return _unary_height_closed_report(j, prec)
        return _pipeline_report(fam, prec)

    if kind == Kind.LAMBDA_BINDING_LENGTH:
        if p < 1:
            raise UnsupportedFamilyError("no closed terms without abstractions")
        if method == "pipeline":
            return _pipeline_report(fam, prec)
        return _binding_length_closed_report(p, prec)

    raise UnsupportedFamilyError(f"no asymptotics for {fam.label()}")  # pragma: no cover


def asym_estimate(fam: Family, n: int, prec: int = DEFAULT_PREC) -> float:
    """log10 of the predicted count at size n; -inf on forbidden parity."""
    if fam.parity_forbidden(n):
        return float("-inf")
    report = asym_constant(fam, prec)
    with mp.workprec(prec):
        sub = mpf(report.subexp_exponent.numerator) / report.subexp_exponent.denominator
        val = report.constant_log10 + sub * mpmath.log10(n) + n * report.growth_log10
        return float(val)


def rho_approx(fam: Family, prec: int = DEFAULT_PREC) -> mpf:
    """Large-k singularity location: 1/(2 sqrt(k)) - 1/(4k) for bounded
    unary height, exactly 1/(1 + 2 sqrt(k)) for bounded binding length."""
    k = fam.param
    if k is None or k < 1:
        raise ValueError("k must be >= 1")
    with mp.workprec(prec):
        if fam.kind == Kind.LAMBDA_UNARY_HEIGHT:
            return 1 / (2 * mpmath.sqrt(mpf(k))) - mpf(1) / (4 * k)
        if fam.kind == Kind.LAMBDA_BINDING_LENGTH:
            return mpf(1) / (1 + 2 * mpmath.sqrt(mpf(k)))
    raise UnsupportedFamilyError(f"no closed-form approximation for {fam.label()}")


# ---------------------------------------------------------------------------
# limit constants


def omega_lambda(m: int) -> float:
    """prod_{n<=M} lambda_n / (n + sqrt(n) + 1/2); converges to ~0.1903.

    Plain float arithmetic: the factors are 1 + O(n^-3/2), so rounding
    drift is far below the O(1/sqrt(M)) truncation error.
    """
    if m > 10**7:
        raise ResourceLimitError("omega product capped at 10^7 factors")
    lam = 0.0
    log_total = 0.0
    for n in range(1, m + 1):
        lam = n + math.sqrt(lam)
        log_total += math.log(lam / (n + math.sqrt(n) + 0.5))
    return math.exp(log_total)


def omega_c(m: int) -> float:
    """prod_{2<=j<=M} c_j / (4j + 4 sqrt(j) - 3); converges to ~0.118."""
    if m > 10**7:
        raise ResourceLimitError("omega product capped at 10^7 factors")
    c = 1.0
    log_total = 0.0
    for j in range(2, m + 1):
        c = 4 * j - 5 + 2 * math.sqrt(c)
        log_total += math.log(c / (4 * j + 4 * math.sqrt(j) - 3))
    return math.exp(log_total)


@dataclass
class LimitDiagnostics:
    j: int
    m: int
    chi: mpf
    gamma_ratio: mpf
    omega_lambda: float
    omega_c: float
    big_c: mpf
    big_d: mpf


def limit_diagnostics(j: int = 7, m: int = 10**6, prec: int = DEFAULT_PREC) -> LimitDiagnostics:
    """The limit constants: chi = lim u_j^(1/2^j), C = lim gamma_j / u_j,
    the two slow omega products, and D assembled from C and omega_lambda."""
    if j > 8:
        raise ResourceLimitError("u_j past j = 8 has thousands of digits")
    with mp.workprec(prec):
        uj = seq_u(j)
        chi = mpf(uj) ** (mpf(1) / 2**j)
        gamma = gamma_exact(j)
        ratio = mpf(gamma.numerator) / gamma.denominator / uj
        w_lam = omega_lambda(m)
        w_c = omega_c(m)
        big_c = ratio
        big_d = big_c ** mpf("0.25") / (
            mpmath.sqrt(mpf(w_lam))
            * mpmath.exp(mpmath.zeta(mpf(1) / 2) / 2 - mpf(1) / 4)
            * mpf(2) ** mpf("2.5")
            * mpmath.gamma(mpf(3) / 4)
            * mpmath.pi ** mpf("0.25")
        )
        return LimitDiagnostics(j, m, chi, ratio, w_lam, w_c, big_c, big_d)
