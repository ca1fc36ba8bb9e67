"""Two-word (double-double) arithmetic and argument reduction mod 2*pi.

Evaluating cos(theta(t) - t*log N) for t up to 1e12 needs the phase known
mod 2*pi even though the raw product t*log N reaches ~1e13.  Plain binary64
carries ~1e-16 relative error, so the phase is garbage beyond t ~ 1e9.
Quantities on the phase-critical path are therefore carried as an
unevaluated sum hi + lo of two machine doubles (~32 significant digits),
and reduction happens against a three-word representation of 2*pi.

All operations accept scalars or numpy arrays and act elementwise, so
million-term sums never allocate per-element Python objects.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RangeError

_SPLITTER = 134217729.0  # 2**27 + 1, Dekker splitting constant

# 2*pi, ln 2 and pi to three binary64 words (hex-exact).
_TWO_PI_WORDS = (
    float.fromhex("0x1.921fb54442d18p+2"),
    float.fromhex("0x1.1a62633145c07p-52"),
    float.fromhex("-0x1.f1976b7ed8fbcp-108"),
)
_LN2_WORDS = (
    float.fromhex("0x1.62e42fefa39efp-1"),
    float.fromhex("0x1.abc9e3b39803fp-56"),
    float.fromhex("0x1.7b57a079a1934p-111"),
)

TWO_PI = _TWO_PI_WORDS[0] + _TWO_PI_WORDS[1]

# Ceiling on t accepted by phase_reduce; the three-word reduction budget is
# validated up to here (Gram-point tables run to t = 1e12).
T_MAX = 1.0e12


def _zeros_like(x):
    return np.zeros_like(x) if isinstance(x, np.ndarray) else 0.0


@dataclass(frozen=True)
class ExtendedReal:
    """Unevaluated sum hi + lo of two binary64 values, |lo| <= ulp(hi)/2."""

    hi: object  # float or ndarray
    lo: object

    def value(self):
        return self.hi + self.lo

    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __sub__(self, other):
        return sub(self, _coerce(other))

    def __rsub__(self, other):
        return sub(_coerce(other), self)

    def __mul__(self, other):
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __truediv__(self, other):
        return div(self, _coerce(other))

    def __rtruediv__(self, other):
        return div(_coerce(other), self)

    def __neg__(self):
        return ExtendedReal(-self.hi, -self.lo)


@dataclass(frozen=True)
class PhaseAngle:
    """An angle reduced to [0, 2*pi) with an absolute error budget in radians."""

    value: object
    abs_err: object


def _coerce(x) -> ExtendedReal:
    if isinstance(x, ExtendedReal):
        return x
    return from_float(x)


def from_float(x) -> ExtendedReal:
    if isinstance(x, np.ndarray):
        x = x.astype(float, copy=False)
        return ExtendedReal(x, np.zeros_like(x))
    return ExtendedReal(float(x), 0.0)


def to_float(x: ExtendedReal):
    return x.hi + x.lo


def _two_sum_raw(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _quick_two_sum(a, b):
    # requires |a| >= |b| (or b == 0)
    s = a + b
    return s, b - (s - a)


def two_sum(a, b) -> ExtendedReal:
    """Error-free sum: hi = fl(a+b) and hi + lo = a + b exactly."""
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise DomainError("two_sum requires finite inputs")
    s, e = _two_sum_raw(a, b)
    return ExtendedReal(s, e)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod_raw(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def add(x: ExtendedReal, y: ExtendedReal) -> ExtendedReal:
    s, e = _two_sum_raw(x.hi, y.hi)
    t, f = _two_sum_raw(x.lo, y.lo)
    e = e + t
    s, e = _quick_two_sum(s, e)
    e = e + f
    s, e = _quick_two_sum(s, e)
    return ExtendedReal(s, e)


def sub(x: ExtendedReal, y: ExtendedReal) -> ExtendedReal:
    return add(x, ExtendedReal(-y.hi, -y.lo))


def mul(x: ExtendedReal, y: ExtendedReal) -> ExtendedReal:
    p, e = _two_prod_raw(x.hi, y.hi)
    e = e + (x.hi * y.lo + x.lo * y.hi)
    p, e = _quick_two_sum(p, e)
    return ExtendedReal(p, e)


def mul_d(x: ExtendedReal, d) -> ExtendedReal:
    p, e = _two_prod_raw(x.hi, d)
    e = e + x.lo * d
    p, e = _quick_two_sum(p, e)
    return ExtendedReal(p, e)


def div(x: ExtendedReal, y: ExtendedReal) -> ExtendedReal:
    q0 = x.hi / y.hi
    r = sub(x, mul_d(y, q0))
    q1 = r.hi / y.hi
    r = sub(r, mul_d(y, q1))
    q2 = r.hi / y.hi
    s, e = _two_sum_raw(q0, q1)
    e = e + q2
    s, e = _quick_two_sum(s, e)
    return ExtendedReal(s, e)


def sqrt(x: ExtendedReal) -> ExtendedReal:
    y0 = np.sqrt(x.hi)
    p, e = _two_prod_raw(y0, y0)
    r = sub(x, ExtendedReal(p, e))
    corr = (r.hi + r.lo) / (2.0 * y0)
    s, e2 = _quick_two_sum(y0, corr)
    return ExtendedReal(s, e2)


def _build_inv_fact(n: int):
    out = []
    cur = ExtendedReal(1.0, 0.0)
    for k in range(1, n + 1):
        cur = div(cur, ExtendedReal(float(k), 0.0))
        out.append((cur.hi, cur.lo))
    return out


_INV_FACT = _build_inv_fact(30)  # two-word 1/1! .. 1/30!
_EXP_ORDER = 26


def _build_inv_odd(n: int):
    out = []
    one = ExtendedReal(1.0, 0.0)
    for k in range(1, n + 1):
        c = div(one, ExtendedReal(float(2 * k + 1), 0.0))
        out.append((c.hi, c.lo))
    return out


_INV_ODD = _build_inv_odd(26)  # two-word 1/3, 1/5, ... 1/53


def exp_dd(x: ExtendedReal) -> ExtendedReal:
    """exp of a two-word argument, ~1e-31 relative error for |x| < 700."""
    k = np.round(x.hi / _LN2_WORDS[0])
    c0, c0e = _two_prod_raw(k, _LN2_WORDS[0])
    r = add(x, ExtendedReal(-c0, -c0e))
    c1, c1e = _two_prod_raw(k, _LN2_WORDS[1])
    r = add(r, ExtendedReal(-c1, -c1e))
    r = add(r, ExtendedReal(-k * _LN2_WORDS[2], 0.0))
    acc = ExtendedReal(_zeros_like(r.hi), _zeros_like(r.hi))
    for n in range(_EXP_ORDER, 1, -1):
        fh, fl = _INV_FACT[n - 1]
        acc = mul(add(acc, ExtendedReal(fh, fl)), r)
    acc = mul(add(acc, ExtendedReal(1.0, 0.0)), r)
    acc = add(acc, ExtendedReal(1.0, 0.0))
    k_int = k.astype(np.int64) if isinstance(k, np.ndarray) else int(k)
    return ExtendedReal(np.ldexp(acc.hi, k_int), np.ldexp(acc.lo, k_int))


def _log_dd_core(x: ExtendedReal) -> ExtendedReal:
    """log of a two-word value with hi in [0.25, 4); Newton over platform log."""
    y0 = np.log(x.hi)
    c = sub(mul(x, exp_dd(ExtendedReal(-y0, _zeros_like(y0)))), ExtendedReal(1.0, 0.0))
    corr = sub(c, ExtendedReal(0.5 * c.hi * c.hi, 0.0))
    return add(ExtendedReal(y0, _zeros_like(y0)), corr)


def _log1p_dd(u: ExtendedReal) -> ExtendedReal:
    """log(1+u) for |u| <= 0.25 via 2*atanh(u/(2+u)); relative error ~1e-32.

    Keeps full relative accuracy as u -> 0, where the Newton path only
    bounds the absolute error.
    """
    z = div(u, add(ExtendedReal(2.0, 0.0), u))
    z2 = mul(z, z)
    acc = ExtendedReal(_zeros_like(z.hi), _zeros_like(z.hi))
    for n in range(25, 0, -1):  # z^2n/(2n+1) terms, |z| <= 1/9
        ch, cl = _INV_ODD[n - 1]
        acc = mul(add(acc, ExtendedReal(ch, cl)), z2)
    acc = add(acc, ExtendedReal(1.0, 0.0))
    return mul_d(mul(z, acc), 2.0)


def log_dd(x: ExtendedReal) -> ExtendedReal:
    """log of a positive two-word value over the full binary64 range.

    The argument is pre-reduced with frexp so the transcendental core never
    sees a scaled exponent; near 1 an atanh series keeps the error relative.
    """
    u = sub(x, ExtendedReal(1.0, 0.0))
    near_one = np.abs(u.hi) < 0.25
    if np.all(near_one):
        return _log1p_dd(u)
    m, e2 = np.frexp(np.asarray(x.hi, dtype=float))
    general = add(
        _log_dd_core(ExtendedReal(m, np.ldexp(np.asarray(x.lo, dtype=float), -e2))),
        _mul_words(np.asarray(e2, dtype=float), _LN2_WORDS),
    )
    if not np.any(near_one):
        return general
    series = _log1p_dd(
        ExtendedReal(np.where(near_one, u.hi, 0.0), np.where(near_one, u.lo, 0.0))
    )
    return ExtendedReal(
        np.where(near_one, series.hi, general.hi),
        np.where(near_one, series.lo, general.lo),
    )


def _mul_words(k, words) -> ExtendedReal:
    """k * (w0 + w1 + w2) with k an exact float; exact to two words."""
    c0, c0e = _two_prod_raw(k, words[0])
    c1, c1e = _two_prod_raw(k, words[1])
    out = add(ExtendedReal(c0, c0e), ExtendedReal(c1, c1e))
    return add(out, ExtendedReal(k * words[2], 0.0))


def ext_log(x) -> ExtendedReal:
    """log(x) for positive machine reals; relative error <= 1e-30."""
    if not (np.all(np.isfinite(x)) and np.all(np.greater(x, 0.0))):
        raise DomainError("ext_log requires finite x > 0")
    return log_dd(from_float(x))


def _wrap_2pi(val):
    if isinstance(val, np.ndarray):
        val = np.where(val < 0.0, val + TWO_PI, val)
        return np.where(val >= TWO_PI, val - TWO_PI, val)
    if val < 0.0:
        val += TWO_PI
    if val >= TWO_PI:
        val -= TWO_PI
    return val


def _reduce_once(x: ExtendedReal, k) -> ExtendedReal:
    p0, p1, p2 = _TWO_PI_WORDS
    c0, c0e = _two_prod_raw(k, p0)
    s, e = _two_sum_raw(x.hi, -c0)
    c1, c1e = _two_prod_raw(k, p1)
    s, e2 = _two_sum_raw(s, -c1)
    tail = e + e2 + x.lo - c0e - c1e - k * p2
    v, vl = _quick_two_sum(s, tail)
    return ExtendedReal(v, vl)


def reduce_mod_2pi(x: ExtendedReal, extra_err=0.0) -> PhaseAngle:
    """Reduce a two-word value into [0, 2*pi) against the 3-word 2*pi.

    extra_err folds an upstream absolute error (radians) into the budget.
    """
    p0 = _TWO_PI_WORDS[0]
    k = np.round(x.hi / p0)
    r = _reduce_once(x, k)
    # the rounded k can land one period off; fix it before collapsing so the
    # wrap itself happens in two-word precision
    v0 = r.hi + r.lo
    k = k + np.where(v0 < 0.0, -1.0, 0.0) + np.where(v0 >= TWO_PI, 1.0, 0.0)
    r = _reduce_once(x, k)
    val = _wrap_2pi(r.hi + r.lo)
    abs_err = 4.5e-16 + np.abs(x.hi) * 8.0e-31 + extra_err
    return PhaseAngle(val, abs_err)


def phase_reduce(t, L: ExtendedReal, strict: bool = True) -> PhaseAngle:
    """(t * (L.hi + L.lo)) mod 2*pi, the product formed in two-word arithmetic.

    t is a machine real in [0, 1e12]; L is two-word (typically ext_log(N)).
    Out-of-range t raises RangeError unless strict=False, in which case the
    result is returned with a correspondingly inflated abs_err.
    """
    out_of_range = np.any(np.less(t, 0.0)) or np.any(np.greater(t, T_MAX))
    if out_of_range and strict:
        raise RangeError(f"phase_reduce supports 0 <= t <= {T_MAX:g}")
    p, e = _two_prod_raw(t, L.hi)
    prod = add(ExtendedReal(p, e), ExtendedReal(t * L.lo, 0.0))
    extra = np.abs(p) * 1.0e-30  # two-word log carries <= 1e-30 relative
    if out_of_range:
        extra = extra + np.abs(p) * 1.1e-16
    return reduce_mod_2pi(prod, extra_err=extra)


def floor_dd(x: ExtendedReal):
    """Exact floor of a two-word value (returned as float)."""
    f = np.floor(x.hi)
    r = (x.hi - f) + x.lo
    return f + np.floor(r)


_HALF_PI_WORDS = (
    float.fromhex("0x1.921fb54442d18p+0"),
    float.fromhex("0x1.1a62633145c07p-54"),
    float.fromhex("-0x1.f1976b7ed8fbcp-110"),
)


def _sin_taylor(r: ExtendedReal) -> ExtendedReal:
    r2 = mul(r, r)
    acc = ExtendedReal(_zeros_like(r.hi), _zeros_like(r.hi))
    for n in range(14, 0, -1):  # (-1)^n r^(2n+1)/(2n+1)!
        fh, fl = _INV_FACT[2 * n]  # 1/(2n+1)!
        sign = 1.0 if n % 2 == 0 else -1.0
        acc = mul(add(acc, ExtendedReal(sign * fh, sign * fl)), r2)
    return mul(r, add(acc, ExtendedReal(1.0, 0.0)))


def _cos_taylor(r: ExtendedReal) -> ExtendedReal:
    r2 = mul(r, r)
    acc = ExtendedReal(_zeros_like(r.hi), _zeros_like(r.hi))
    for n in range(14, 0, -1):  # (-1)^n r^(2n)/(2n)!
        fh, fl = _INV_FACT[2 * n - 1]  # 1/(2n)!
        sign = 1.0 if n % 2 == 0 else -1.0
        acc = mul(add(acc, ExtendedReal(sign * fh, sign * fl)), r2)
    return add(acc, ExtendedReal(1.0, 0.0))


def sincos_dd(x: ExtendedReal):
    """(sin x, cos x) of a two-word argument, ~1e-31 absolute error."""
    k = np.round(x.hi / _TWO_PI_WORDS[0])
    v = _reduce_once(x, k)
    v0 = v.hi + v.lo
    k = k + np.where(v0 < 0.0, -1.0, 0.0) + np.where(v0 >= TWO_PI, 1.0, 0.0)
    v = _reduce_once(x, k)
    # split off quadrants: x mod 2pi = m*(pi/2) + r with |r| <= pi/4
    m = np.round((v.hi + v.lo) / _HALF_PI_WORDS[0])
    c0, c0e = _two_prod_raw(m, _HALF_PI_WORDS[0])
    r = add(v, ExtendedReal(-c0, -c0e))
    c1, c1e = _two_prod_raw(m, _HALF_PI_WORDS[1])
    r = add(r, ExtendedReal(-c1, -c1e))
    r = add(r, ExtendedReal(-m * _HALF_PI_WORDS[2], 0.0))
    s, c = _sin_taylor(r), _cos_taylor(r)
    q = np.mod(m, 4.0)
    sin_out = _select4(q, s, c, ExtendedReal(-s.hi, -s.lo), ExtendedReal(-c.hi, -c.lo))
    cos_out = _select4(q, c, ExtendedReal(-s.hi, -s.lo), ExtendedReal(-c.hi, -c.lo), s)
    return sin_out, cos_out


def _select4(q, v0, v1, v2, v3):
    """Pick v_{q mod 4} elementwise."""
    hi = np.where(q == 0.0, v0.hi, np.where(q == 1.0, v1.hi, np.where(q == 2.0, v2.hi, v3.hi)))
    lo = np.where(q == 0.0, v0.lo, np.where(q == 1.0, v1.lo, np.where(q == 2.0, v2.lo, v3.lo)))
    return ExtendedReal(hi, lo)


def atan_dd(r: ExtendedReal) -> ExtendedReal:
    """arctan of a two-word value with |r| <= 1."""
    one = ExtendedReal(1.0, 0.0)
    # two argument-halving steps: atan(r) = 2 atan(r/(1+sqrt(1+r^2)))
    for _ in range(2):
        r = div(r, add(one, sqrt(add(one, mul(r, r)))))
    r2 = mul(r, r)
    acc = ExtendedReal(_zeros_like(r.hi), _zeros_like(r.hi))
    for n in range(24, 0, -1):  # (-1)^n r^(2n+1)/(2n+1), |r| <= tan(pi/16)
        ch, cl = _INV_ODD[n - 1]
        sign = 1.0 if n % 2 == 0 else -1.0
        acc = mul(add(acc, ExtendedReal(sign * ch, sign * cl)), r2)
    val = mul(r, add(acc, one))
    return mul_d(val, 4.0)


def atan2_dd(y: ExtendedReal, x: ExtendedReal) -> ExtendedReal:
    """Principal Arg of x + iy in two-word arithmetic (elementwise)."""
    swap = np.abs(y.hi) > np.abs(x.hi)
    num = ExtendedReal(np.where(swap, x.hi, y.hi), np.where(swap, x.lo, y.lo))
    den = ExtendedReal(np.where(swap, y.hi, x.hi), np.where(swap, y.lo, x.lo))
    base = atan_dd(div(num, den))
    half_pi = ExtendedReal(_HALF_PI_WORDS[0], _HALF_PI_WORDS[1])
    pi_dd = PI_DD
    sign_y = np.where(y.hi + y.lo >= 0.0, 1.0, -1.0)
    # |y| > |x|: sign(y)*pi/2 - atan(x/y)
    swapped = sub(ExtendedReal(sign_y * half_pi.hi, sign_y * half_pi.lo), base)
    out = ExtendedReal(np.where(swap, swapped.hi, base.hi), np.where(swap, swapped.lo, base.lo))
    # x < 0 and |x| >= |y|: shift by +-pi
    neg_x = (~swap) & (x.hi < 0.0)
    shifted = add(out, ExtendedReal(sign_y * pi_dd.hi, sign_y * pi_dd.lo))
    return ExtendedReal(np.where(neg_x, shifted.hi, out.hi), np.where(neg_x, shifted.lo, out.lo))


PI_DD = ExtendedReal(
    float.fromhex("0x1.921fb54442d18p+1"), float.fromhex("0x1.1a62633145c07p-53")
)
TWO_PI_DD = ExtendedReal(_TWO_PI_WORDS[0], _TWO_PI_WORDS[1])
PI_8_DD = ExtendedReal(
    float.fromhex("0x1.921fb54442d18p-2"), float.fromhex("0x1.1a62633145c07p-56")
)
