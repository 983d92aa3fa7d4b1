"""Deformed Hermite polynomial families in exact rational arithmetic.

Two independent constructions of the same one-parameter deformation of the
physicists' Hermite polynomials:

* generating function:  (1 + q(2tζ − t²))^(1/q − ½) = Σ_n H_n(ζ, q) tⁿ/n!
* Rodrigues formula:    H_n = (−1)ⁿ(1+qζ²)^(1/q) dⁿ/dζⁿ (1+qζ²)^(n − 1/q)

Both reduce to the standard H_n at q = 0, but differ at q ≠ 0 by a scalar
rational function r_n(q) recorded by proportionality_ratio.  The generating
function family is canonical: it satisfies the three-term recurrence

    H_{m+1} = ζ[(2−q) − 2qm] H_m − m[(2−q) − q(m−1)] H_{m−1}

and the derivative relation checked by derivative_relation_residual.

Coefficients are bivariate exact rationals: a polynomial maps each ζ-exponent
to a dict {q-exponent: Fraction}.  Case 1 stores q = λ̃ = λ/α, Case 2 stores
q = 1/μ = 1/(αλ), and Case 3 stores the positive variable υ² = λ²/(2α),
which is −q, so its coefficients are the Case 1 ones with odd q-powers
sign-flipped.  No floating point enters until grid sampling.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .discrete import Grid, inner_product
from .errors import (
    ConstraintViolatedError,
    DegreeMismatchError,
    NotABoundStateError,
    NotProportionalError,
)
from .families import (
    Kind,
    ShapeInvariantFamily,
    bound_state_count,
    ground_state_unnormalized,
    unified_deformation,
)


class FamilyTag(enum.Enum):
    GENERATING_FUNCTION = "generating_function"
    RODRIGUES = "rodrigues"


class Parameterization(enum.Enum):
    CASE1 = "case1"
    CASE2 = "case2"
    CASE3 = "case3"


def parameterization_for(kind: Kind) -> Parameterization:
    """Constant-mass families sample at q = 0, where all three coincide."""
    if kind == Kind.CASE2:
        return Parameterization.CASE2
    if kind == Kind.CASE3:
        return Parameterization.CASE3
    return Parameterization.CASE1


def _sign_of(par: Parameterization) -> int:
    # stored variable = _sign_of(par) * unified q
    return -1 if par == Parameterization.CASE3 else 1


# === exact polynomials in the deformation variable (dict exp -> Fraction) ===

def _qp_trim(p: dict) -> dict:
    return {j: c for j, c in p.items() if c != 0}


def _qp_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for j, c in b.items():
        out[j] = out.get(j, Fraction(0)) + c
    return _qp_trim(out)


def _qp_scale(a: dict, s: Fraction) -> dict:
    if s == 0:
        return {}
    return {j: c * s for j, c in a.items()}


def _qp_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ja, ca in a.items():
        for jb, cb in b.items():
            j = ja + jb
            out[j] = out.get(j, Fraction(0)) + ca * cb
    return _qp_trim(out)


def _qp_flip(a: dict) -> dict:
    """Substitute q -> -q."""
    return {j: (c if j % 2 == 0 else -c) for j, c in a.items()}


def _qp_eval(a: dict, q):
    total = q * 0
    for j in sorted(a):
        coeff = float(a[j]) if isinstance(q, float) else a[j]
        total = total + coeff * q ** j
    return total


def _q_lin(c0, c1, par: Parameterization) -> dict:
    """c0 + c1*q written in the stored variable of `par`."""
    return _qp_trim({0: Fraction(c0), 1: Fraction(c1) * _sign_of(par)})


# === bivariate layer: dict {zeta_exp -> q-polynomial} ===

def _lpd_trim(d: dict) -> dict:
    return {k: p for k, p in ((k, _qp_trim(p)) for k, p in d.items()) if p}


def _lpd_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, p in b.items():
        out[k] = _qp_add(out.get(k, {}), p)
    return _lpd_trim(out)


def _lpd_scale_qp(a: dict, qp: dict) -> dict:
    return _lpd_trim({k: _qp_mul(p, qp) for k, p in a.items()})


def _lpd_zeta_shift(a: dict, power: int = 1) -> dict:
    return {k + power: p for k, p in a.items()}


def _lpd_dzeta(a: dict) -> dict:
    return _lpd_trim({k - 1: _qp_scale(p, Fraction(k)) for k, p in a.items() if k > 0})


@dataclass
class LambdaPoly:
    """One member of a deformed Hermite family.

    coeffs maps the ζ-exponent to an exact polynomial in the stored
    deformation variable.  Only exponents of the same parity as the degree
    may appear, and no stored coefficient is zero.
    """

    degree: int
    coeffs: dict
    family_tag: FamilyTag
    parameterization: Parameterization

    def __post_init__(self):
        self.coeffs = _lpd_trim(self.coeffs)
        for k in self.coeffs:
            if k < 0 or k > self.degree:
                raise ConstraintViolatedError(
                    f"zeta exponent {k} outside [0, {self.degree}]")
            if (k - self.degree) % 2 != 0:
                raise ConstraintViolatedError(
                    f"zeta exponent {k} breaks the parity of degree {self.degree}")

    def is_zero(self) -> bool:
        return not self.coeffs


def evaluate(p: LambdaPoly, zeta, q):
    """H(ζ, q) with exact (Fraction) or float arguments.

    `q` is the value of the *stored* deformation variable: λ̃, 1/μ or υ².
    """
    total = zeta * 0
    for k in sorted(p.coeffs):
        total = total + _qp_eval(p.coeffs[k], q) * zeta ** k
    return total


def gf_polynomial(n: int, parameterization: Parameterization) -> LambdaPoly:
    """H_n from the generating-function expansion.

    Expanding (1 + q(2tζ − t²))^(1/q − ½) binomially, the falling product
    (1/q − ½)(1/q − ³⁄₂)···(1/q − (2k−1)/2) times qᵏ is the q-polynomial
    Π_k(q) = Π_{j<k} (2 − (2j+1)q) / 2ᵏ, so every tⁿ coefficient is
    polynomial in q:

        H_n = Σ_{k=⌈n/2⌉}^{n} n! (−1)^(n−k) 2^(k−n) Π_k(q) ζ^(2k−n)
              / ((n−k)! (2k−n)!)
    """
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    coeffs: dict = {}
    k0 = (n + 1) // 2
    pi_k = {0: Fraction(1)}
    for j in range(k0):
        pi_k = _qp_mul(pi_k, {0: Fraction(2), 1: Fraction(-(2 * j + 1))})
    for k in range(k0, n + 1):
        scalar = Fraction(math.factorial(n) * (-1) ** (n - k),
                          math.factorial(n - k) * math.factorial(2 * k - n)
                          * 2 ** (n - k))
        coeffs[2 * k - n] = _qp_scale(pi_k, scalar)
        pi_k = _qp_mul(pi_k, {0: Fraction(2), 1: Fraction(-(2 * k + 1))})
    if _sign_of(parameterization) < 0:
        coeffs = {k: _qp_flip(p) for k, p in coeffs.items()}
    return LambdaPoly(n, coeffs, FamilyTag.GENERATING_FUNCTION, parameterization)


def rodrigues_polynomial(n: int, parameterization: Parameterization) -> LambdaPoly:
    """H_n by exact differentiation of the Rodrigues kernel.

    Terms of dⁿ/dζⁿ (1+qζ²)^(n−1/q) are tracked as c(q)·ζᵃ·(1+qζ²)^(β+j)
    with β = n − 1/q.  One derivative maps (a, j) to (a−1, j) with weight a
    and to (a+1, j−1) with weight 2q(n+j) − 2; the q from the chain rule
    cancels the 1/q in β, so weights stay polynomial.  The final factor
    (1+qζ²)^(1/q) lifts every surviving power to the nonnegative integer
    n+j, which is expanded binomially.
    """
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    terms = {(0, 0): {0: Fraction(1)}}
    for _ in range(n):
        nxt: dict = {}

        def _acc(key, qp):
            nxt[key] = _qp_add(nxt.get(key, {}), qp)

        for (a, j), c in terms.items():
            if a >= 1:
                _acc((a - 1, j), _qp_scale(c, Fraction(a)))
            _acc((a + 1, j - 1),
                 _qp_mul(c, {0: Fraction(-2), 1: Fraction(2 * (n + j))}))
        terms = {key: qp for key, qp in nxt.items() if qp}
    coeffs: dict = {}
    sign = Fraction((-1) ** n)
    for (a, j), c in terms.items():
        for i in range(n + j + 1):
            shifted = {jj + i: cc for jj, cc in c.items()}
            contrib = _qp_scale(shifted, sign * math.comb(n + j, i))
            coeffs[a + 2 * i] = _qp_add(coeffs.get(a + 2 * i, {}), contrib)
    if _sign_of(parameterization) < 0:
        coeffs = {k: _qp_flip(p) for k, p in coeffs.items()}
    return LambdaPoly(n, coeffs, FamilyTag.RODRIGUES, parameterization)


def three_term_next(h_m: LambdaPoly, h_m_minus_1, m: int) -> LambdaPoly:
    """H_{m+1} = ζ[(2−q) − 2qm] H_m − m[(2−q) − q(m−1)] H_{m−1}.

    For m = 0 pass h_m_minus_1 = None; the m-weighted term vanishes.
    """
    if h_m.family_tag != FamilyTag.GENERATING_FUNCTION:
        raise ValueError("recurrence applies to generating-function polynomials")
    if h_m.degree != m:
        raise DegreeMismatchError(f"expected degree {m}, got {h_m.degree}")
    par = h_m.parameterization
    out = _lpd_zeta_shift(_lpd_scale_qp(h_m.coeffs, _q_lin(2, -(2 * m + 1), par)))
    if m > 0:
        if h_m_minus_1 is None or h_m_minus_1.degree != m - 1:
            raise DegreeMismatchError(f"expected companion of degree {m - 1}")
        if h_m_minus_1.family_tag != FamilyTag.GENERATING_FUNCTION \
                or h_m_minus_1.parameterization != par:
            raise ValueError("mismatched companion polynomial")
        back = _lpd_scale_qp(h_m_minus_1.coeffs, _q_lin(2 * m, -m * m, par))
        out = _lpd_add(out, {k: _qp_scale(p, Fraction(-1)) for k, p in back.items()})
    return LambdaPoly(m + 1, out, FamilyTag.GENERATING_FUNCTION, par)


def derivative_relation_residual(m: int, parameterization: Parameterization) -> LambdaPoly:
    """m(2−q)H_{m−1} − H′_m − 2ζqm H′_{m−1} + qm(m−1) H′_{m−2}.

    Identically zero for the generating-function family; returned as a
    polynomial so the caller can assert exact vanishing.  Terms whose index
    would be negative carry a zero weight and are skipped.
    """
    if m < 0:
        raise ValueError(f"index must be nonnegative, got {m}")
    par = parameterization
    res = _lpd_scale_qp(gf_polynomial(m, par).coeffs, {0: Fraction(-1)})
    res = _lpd_dzeta(res)                                   # -H'_m
    if m >= 1:
        h1 = gf_polynomial(m - 1, par)
        res = _lpd_add(res, _lpd_scale_qp(h1.coeffs, _q_lin(2 * m, -m, par)))
        dh1 = _lpd_dzeta(h1.coeffs)
        res = _lpd_add(res, _lpd_zeta_shift(
            _lpd_scale_qp(dh1, _q_lin(0, -2 * m, par))))     # -2ζqm H'_{m-1}
    if m >= 2:
        dh2 = _lpd_dzeta(gf_polynomial(m - 2, par).coeffs)
        res = _lpd_add(res, _lpd_scale_qp(dh2, _q_lin(0, m * (m - 1), par)))
    return LambdaPoly(max(m - 1, 0), res, FamilyTag.GENERATING_FUNCTION, par)


# === reconciling the two constructions ===

def _qp_dense(p: dict) -> list:
    deg = max(p) if p else 0
    return [p.get(i, Fraction(0)) for i in range(deg + 1)]


def _dense_trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _dense_mod(a: list, b: list) -> list:
    a = list(a)
    while len(a) >= len(b) > 0 and _dense_trim(a):
        if len(a) < len(b):
            break
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] -= f * bc
        a.pop()
        _dense_trim(a)
    return a


def _qp_gcd(a: dict, b: dict) -> dict:
    x, y = _dense_trim(_qp_dense(a)), _dense_trim(_qp_dense(b))
    while y:
        x, y = y, _dense_mod(x, y)
        y = _dense_trim(y)
        if y:
            y = [c / y[-1] for c in y]   # monic keeps coefficients small
    return _qp_trim({i: c for i, c in enumerate(x)})


def _qp_divexact(a: dict, g: dict) -> dict:
    num = _dense_trim(_qp_dense(a))
    den = _dense_trim(_qp_dense(g))
    out = [Fraction(0)] * (len(num) - len(den) + 1)
    while _dense_trim(num) and len(num) >= len(den):
        f = num[-1] / den[-1]
        shift = len(num) - len(den)
        out[shift] = f
        for i, dc in enumerate(den):
            num[shift + i] -= f * dc
        num.pop()
    return _qp_trim({i: c for i, c in enumerate(out)})


@dataclass
class Ratio:
    """A scalar rational function num(q)/den(q), kept in lowest terms."""

    num: dict
    den: dict

    def __eq__(self, other):
        if not isinstance(other, Ratio):
            return NotImplemented
        return _qp_mul(self.num, other.den) == _qp_mul(self.den, other.num)

    def at(self, q: Fraction) -> Fraction:
        return Fraction(_qp_eval(self.num, q)) / Fraction(_qp_eval(self.den, q))


def _make_ratio(num: dict, den: dict) -> Ratio:
    g = _qp_gcd(num, den)
    if g:
        num, den = _qp_divexact(num, g), _qp_divexact(den, g)
    # clear denominators with one common factor, then strip the content
    lcm = 1
    for p in (num, den):
        for c in p.values():
            lcm = math.lcm(lcm, c.denominator)
    num = _qp_scale(num, Fraction(lcm))
    den = _qp_scale(den, Fraction(lcm))
    content = math.gcd(*(abs(c.numerator) for p in (num, den) for c in p.values()))
    if content > 1:
        num = _qp_scale(num, Fraction(1, content))
        den = _qp_scale(den, Fraction(1, content))
    anchor = den.get(0) or den[max(den)]
    if anchor < 0:
        num = _qp_scale(num, Fraction(-1))
        den = _qp_scale(den, Fraction(-1))
    return Ratio(num, den)


def proportionality_ratio(n: int, parameterization: Parameterization) -> Ratio:
    """r_n(q) with rodrigues_polynomial(n) = r_n(q) · gf_polynomial(n).

    Proportionality is verified by cross-multiplying every coefficient pair;
    a failure raises NotProportional rather than returning a bogus ratio.
    r_n(0) = 1 always, so the two constructions share the harmonic limit.
    """
    rod = rodrigues_polynomial(n, parameterization)
    gf = gf_polynomial(n, parameterization)
    support = set(rod.coeffs) | set(gf.coeffs)
    k0 = max(support, default=0)
    num, den = rod.coeffs.get(k0, {}), gf.coeffs.get(k0, {})
    if not num or not den:
        raise NotProportionalError(f"degree-{n} leading coefficients do not pair")
    for k in support:
        lhs = _qp_mul(rod.coeffs.get(k, {}), den)
        rhs = _qp_mul(gf.coeffs.get(k, {}), num)
        if lhs != rhs:
            raise NotProportionalError(
                f"coefficient of zeta^{k} breaks proportionality at degree {n}")
    return _make_ratio(num, den)


def harmonic_limit(p: LambdaPoly) -> dict:
    """Evaluate every coefficient at q = 0: the standard Hermite H_n."""
    out = {k: qp.get(0, Fraction(0)) for k, qp in p.coeffs.items()}
    return {k: c for k, c in out.items() if c != 0}


# === grid sampling ===

def _deformation_value(family: ShapeInvariantFamily) -> float:
    """Numeric value of the stored variable: λ̃, 1/μ, υ², or 0."""
    q = unified_deformation(family)
    return -q if family.profile.kind == Kind.CASE3 else q


def _coordinate_scale(family: ShapeInvariantFamily) -> float:
    """ζ = √α·x, except Case 3 where ϱ = √(2α)·x."""
    if family.profile.kind == Kind.CASE3:
        return math.sqrt(2.0 * family.alpha0)
    return math.sqrt(family.alpha0)


def eigenfunction_samples(family: ShapeInvariantFamily, n: int, grid: Grid):
    """φ_n(x) = N_n H_n(ζ(x), q) φ_0(x) sampled on the grid.

    N_n makes the trapezoid norm one (endpoints are implicit zeros), and
    the leading coefficient of H_n is taken positive, so signs never depend
    on the alternating (−1)ⁿ prefactors of the derivative construction.
    """
    if n < 0:
        raise ValueError(f"level index must be nonnegative, got {n}")
    count = bound_state_count(family)
    if count is not None and n >= count:
        raise NotABoundStateError(
            f"level {n} is not a bound state; this family binds "
            f"{count} levels (n = 0..{count - 1})")
    par = parameterization_for(family.profile.kind)
    d = _deformation_value(family)
    poly = gf_polynomial(n, par)
    dense = np.zeros(n + 1)
    for k, qp in poly.coeffs.items():
        dense[k] = _qp_eval(qp, float(d))
    if dense[n] < 0:
        dense = -dense
    zeta = _coordinate_scale(family) * grid.points
    vals = np.polynomial.polynomial.polyval(zeta, dense)
    phi = vals * ground_state_unnormalized(family, grid.points)
    phi = phi / math.sqrt(inner_product(phi, phi, grid))
    return phi


def to_json_dict(p: LambdaPoly) -> dict:
    """The interchange form: one row per (ζ-exponent, q-exponent) pair."""
    rows = []
    for k in sorted(p.coeffs):
        for j in sorted(p.coeffs[k]):
            c = p.coeffs[k][j]
            rows.append({"zeta_exp": k, "q_exp": j,
                         "num": c.numerator, "den": c.denominator})
    return {"degree": p.degree,
            "parameterization": p.parameterization.value,
            "coeffs": rows}
