"""Truncated deformation series: elements of k(z_1..z_m)[h] / (h^N).

An element is a fixed-length list of rational-function coefficients
``c_0 + c_1 h + ... + c_{N-1} h^{N-1}``; the class of a product is the
truncated product, inversion exists exactly when ``c_0`` is invertible,
and division by ``h`` (used by confluent sigma-derivations) is the
canonical coefficient shift of the polynomial representative.

``subst_affine`` implements z -> alpha*z + beta where alpha, beta are
scalar series, by exact Taylor expansion around the h^0 image; the
``first_difference_div_h`` variant computes (f(sub) - f)/h without ever
forming the cancelling pair, so no truncation order is lost.
"""

from fractions import Fraction

from ..errors import DivisionByNoninvertible
from .frac import Frac


class HSeries:
    __slots__ = ("ring", "order", "coeffs")

    def __init__(self, ring, order, coeffs):
        self.ring = ring
        self.order = order
        cs = list(coeffs)
        zero = Frac(ring.zero)
        if len(cs) < order:
            cs.extend([zero] * (order - len(cs)))
        self.coeffs = tuple(cs[:order])

    # -- constructors --------------------------------------------------------
    @staticmethod
    def const(ring, order, value):
        return HSeries(ring, order, [Frac(ring.const(Fraction(value)))])

    @staticmethod
    def from_frac(ring, order, frac):
        return HSeries(ring, order, [frac])

    @staticmethod
    def h(ring, order):
        return HSeries(ring, order, [Frac(ring.zero), Frac(ring.one)])

    # -- predicates -----------------------------------------------------------
    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def is_one(self):
        return self.coeffs[0].is_one() and all(c.is_zero() for c in self.coeffs[1:])

    def is_invertible(self):
        return not self.coeffs[0].is_zero()

    @property
    def h0(self):
        return self.coeffs[0]

    def h_valuation(self):
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                return k
        return self.order

    def is_constant(self):
        return all(c.is_constant() for c in self.coeffs)

    # -- arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, HSeries):
            return other
        if isinstance(other, Frac):
            return HSeries.from_frac(self.ring, self.order, other)
        if isinstance(other, (int, Fraction)):
            return HSeries.const(self.ring, self.order, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return HSeries(self.ring, self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return HSeries(self.ring, self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return HSeries(self.ring, self.order, [-c for c in self.coeffs])

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = self.order
        zero = Frac(self.ring.zero)
        out = [zero] * n
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= n:
                    break
                if b.is_zero():
                    continue
                out[i + j] = out[i + j] + a * b
        return HSeries(self.ring, n, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def inverse(self):
        if not self.is_invertible():
            raise DivisionByNoninvertible("h-series with zero h^0 part is not invertible")
        n = self.order
        c0inv = self.coeffs[0].inverse()
        out = [c0inv]
        for k in range(1, n):
            acc = Frac(self.ring.zero)
            for j in range(k):
                acc = acc + out[j] * self.coeffs[k - j]
            out.append(-(acc * c0inv))
        return HSeries(self.ring, n, out)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = HSeries.const(self.ring, self.order, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    # -- h-manipulation -----------------------------------------------------------
    def shift_down(self):
        """Divide the polynomial representative by h; requires c_0 = 0."""
        if not self.coeffs[0].is_zero():
            raise DivisionByNoninvertible("element not divisible by h")
        return HSeries(self.ring, self.order, list(self.coeffs[1:]) + [Frac(self.ring.zero)])

    def mul_h(self, k=1):
        zero = Frac(self.ring.zero)
        return HSeries(self.ring, self.order, [zero] * k + list(self.coeffs[: self.order - k]))

    # -- calculus -------------------------------------------------------------------
    def derivative(self, var_index):
        return HSeries(self.ring, self.order, [c.derivative(var_index) for c in self.coeffs])

    def subst_affine(self, var_index, alpha, beta):
        """Exact substitution z_i -> alpha*z_i + beta, alpha/beta scalar series."""
        w_num, u = _split_affine(self, var_index, alpha, beta)
        out = [Frac(self.ring.zero)] * self.order
        derivs = list(self.coeffs)
        fact = Fraction(1)
        u_pow = None
        for j in range(self.order):
            if j:
                fact *= j
                u_pow = u if u_pow is None else u_pow * u
                if u_pow.is_zero():
                    break
            for m, fm in enumerate(derivs):
                if m + j >= self.order or fm.is_zero():
                    continue
                g = _apply_w(fm, var_index, w_num) / fact
                if j == 0:
                    out[m] = out[m] + g
                else:
                    for t, c in enumerate(u_pow.coeffs):
                        if m + t >= self.order:
                            break
                        if not c.is_zero():
                            out[m + t] = out[m + t] + c * g
            derivs = [f.derivative(var_index) for f in derivs]
        return HSeries(self.ring, self.order, out)

    def first_difference_div_h(self, var_index, alpha, beta):
        """(f(alpha*z+beta) - f)/h for confluent images (alpha_0=1, beta_0=0)."""
        w_num, u = _split_affine(self, var_index, alpha, beta)
        if w_num is not None:
            raise DivisionByNoninvertible("substitution is not trivial at h=0")
        g = u.shift_down()  # u has h-valuation >= 1 by construction
        out = [Frac(self.ring.zero)] * self.order
        derivs = [c.derivative(var_index) for c in self.coeffs]
        fact = Fraction(1)
        g_pow = HSeries.const(self.ring, self.order, 1)
        for j in range(1, self.order + 1):
            fact *= j
            g_pow = g_pow * g
            if g_pow.is_zero():
                break
            for m, fm in enumerate(derivs):
                if m + j - 1 >= self.order or fm.is_zero():
                    continue
                piece = fm / fact
                for t, c in enumerate(g_pow.coeffs):
                    k = m + j - 1 + t
                    if k >= self.order:
                        break
                    if not c.is_zero():
                        out[k] = out[k] + c * piece
            derivs = [f.derivative(var_index) for f in derivs]
        return HSeries(self.ring, self.order, out)

    # -- printing ----------------------------------------------------------------------
    def __str__(self):
        return hseries_str(self)

    def __repr__(self):
        return f"HSeries({self})"


def _split_affine(x, var_index, alpha, beta):
    """Split z -> alpha z + beta into the h^0 image and the h-divisible tail.

    Returns (w_num, u): w_num is the h^0 image polynomial when it differs
    from z itself (else None), u is the HSeries tail alpha_+ z + beta_+.
    """
    ring = x.ring
    order = x.order
    alpha = _as_scalar_series(ring, order, alpha)
    beta = _as_scalar_series(ring, order, beta)
    z = Frac(ring.var(ring.names[var_index]))
    a0, b0 = alpha.coeffs[0], beta.coeffs[0]
    if a0.is_one() and b0.is_zero():
        w_num = None
    else:
        w_num = a0 * z + b0
    tail = [Frac(ring.zero)]
    for k in range(1, order):
        tail.append(alpha.coeffs[k] * z + beta.coeffs[k])
    u = HSeries(ring, order, tail)
    return w_num, u


def _as_scalar_series(ring, order, value):
    if isinstance(value, HSeries):
        return HSeries(ring, order, value.coeffs)
    if isinstance(value, Frac):
        return HSeries.from_frac(ring, order, value)
    return HSeries.const(ring, order, value)


def _apply_w(f, var_index, w_num):
    """Evaluate f at the h^0 image (None means identity)."""
    if w_num is None:
        return f
    return f.subst_frac(var_index, w_num)


def hseries_str(x):
    dom = x.ring.domain
    pieces = []
    for k, c in enumerate(x.coeffs):
        if c.is_zero():
            continue
        neg = False
        if dom.p is None:
            lead = c.num.leading()
            if lead is not None and lead[1] < 0:
                neg = True
                c = -c
        if k == 0:
            body = _coeff_str(c)
        else:
            hpart = "h" if k == 1 else f"h^{k}"
            body = hpart if c.is_one() else f"{_coeff_str(c)}*{hpart}"
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    if not pieces:
        return "0"
    return "".join(pieces)


def _coeff_str(c):
    cs = str(c)
    if any(op in cs[1:] for op in "+-") or "*" in cs or " " in cs or "/" in cs:
        if not (cs.startswith("(") and cs.endswith(")")):
            cs = f"({cs})"
    return cs
