"""Sparse multivariate polynomials over an exact coefficient domain.

Terms are stored as ``{exponent_tuple: coefficient}`` with zero
coefficients always dropped, so dict equality is structural equality.
Printing uses graded-lex term order (total degree first, then the
exponent tuple), descending.
"""

from fractions import Fraction

from ..errors import DivisionByNoninvertible


class PolyRing:
    """Polynomial ring over a Domain in a fixed ordered tuple of names."""

    __slots__ = ("domain", "names", "_zero", "_one", "_vars")

    def __init__(self, domain, names):
        self.domain = domain
        self.names = tuple(names)
        z = (0,) * len(self.names)
        self._zero = Poly(self, {})
        self._one = Poly(self, {z: domain.one})
        self._vars = {}
        for i, n in enumerate(self.names):
            e = tuple(1 if j == i else 0 for j in range(len(self.names)))
            self._vars[n] = Poly(self, {e: domain.one})

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.domain == other.domain
            and self.names == other.names
        )

    def __hash__(self):
        return hash((self.domain, self.names))

    def __repr__(self):
        return f"{self.domain!r}[{', '.join(self.names)}]"

    @property
    def zero(self):
        return self._zero

    @property
    def one(self):
        return self._one

    def var(self, name):
        return self._vars[name]

    def index(self, name):
        return self.names.index(name)

    def const(self, c):
        c = self.domain.from_fraction(Fraction(c)) if not isinstance(c, int) else self.domain.from_int(c)
        if self.domain.is_zero(c):
            return self._zero
        return Poly(self, {(0,) * len(self.names): c})

    def from_terms(self, terms):
        dom = self.domain
        return Poly(self, {e: c for e, c in terms.items() if not dom.is_zero(c)})


class Poly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # -- predicates -------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        if not self.terms:
            return self.ring.domain.zero
        ((e, c),) = self.terms.items()
        if any(e):
            raise ValueError("not a constant polynomial")
        return c

    def is_one(self):
        return self.is_constant() and not self.is_zero() and self.ring.domain.is_one(self.constant_value())

    def support_vars(self):
        """Indices of variables that actually occur."""
        out = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    out.add(i)
        return out

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, var_index):
        return max((e[var_index] for e in self.terms), default=0)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        dom = self.ring.domain
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = dom.add(out.get(e, dom.zero), c)
            if dom.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return Poly(self.ring, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        dom = self.ring.domain
        return Poly(self.ring, {e: dom.neg(c) for e, c in self.terms.items()})

    def __mul__(self, other):
        dom = self.ring.domain
        if not isinstance(other, Poly):
            other = self.ring.const(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = dom.add(out.get(e, dom.zero), dom.mul(c1, c2))
                if dom.is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return Poly(self.ring, out)

    def scale(self, c):
        dom = self.ring.domain
        if dom.is_zero(c):
            return self.ring.zero
        return Poly(self.ring, {e: dom.mul(k, c) for e, k in self.terms.items()})

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = self.ring.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        return isinstance(other, Poly) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self.terms.items()))))

    # -- calculus and substitution ---------------------------------------
    def derivative(self, var_index):
        dom = self.ring.domain
        out = {}
        for e, c in self.terms.items():
            k = e[var_index]
            if k == 0:
                continue
            e2 = e[:var_index] + (k - 1,) + e[var_index + 1 :]
            s = dom.add(out.get(e2, dom.zero), dom.mul(c, dom.from_int(k)))
            if dom.is_zero(s):
                out.pop(e2, None)
            else:
                out[e2] = s
        return Poly(self.ring, out)

    def subst_poly(self, var_index, image):
        """Substitute ``image`` (a Poly) for one variable."""
        ring = self.ring
        # group by exponent of the substituted variable
        groups = {}
        for e, c in self.terms.items():
            k = e[var_index]
            rest = e[:var_index] + (0,) + e[var_index + 1 :]
            groups.setdefault(k, {})[rest] = c
        out = ring.zero
        power = ring.one
        last = 0
        for k in sorted(groups):
            for _ in range(k - last):
                power = power * image
            last = k
            out = out + ring.from_terms(groups[k]) * power
        return out

    def leading(self):
        """Leading (graded-lex, descending) exponent/coefficient pair."""
        if not self.terms:
            return None
        e = max(self.terms, key=lambda t: (sum(t), t))
        return e, self.terms[e]

    # -- univariate helpers (for gcd reduction) ---------------------------
    def univariate_coeffs(self, var_index):
        out = [self.ring.domain.zero] * (self.degree_in(var_index) + 1)
        for e, c in self.terms.items():
            out[e[var_index]] = c
        return out

    # -- printing ---------------------------------------------------------
    def __str__(self):
        return poly_str(self)

    def __repr__(self):
        return f"Poly({poly_str(self)})"


def poly_str(p):
    if not p.terms:
        return "0"
    dom = p.ring.domain
    names = p.ring.names
    items = sorted(p.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)
    pieces = []
    for e, c in items:
        mono = "*".join(
            n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
        )
        negative = dom.p is None and c < 0
        mag = -c if negative else c
        if mono:
            cs = "" if dom.is_one(mag) else dom.coeff_str(mag) + "*"
            body = cs + mono
        else:
            body = dom.coeff_str(mag)
        if not pieces:
            pieces.append(("-" if negative else "") + body)
        else:
            pieces.append((" - " if negative else " + ") + body)
    return "".join(pieces)


def _uni_divmod(num, den, dom):
    """Dense-list division of univariate polynomials."""
    num = list(num)
    dn = len(den) - 1
    while den and dom.is_zero(den[-1]):
        den = den[:-1]
        dn -= 1
    q = [dom.zero] * max(0, len(num) - dn)
    inv_lead = dom.inv(den[-1])
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if dom.is_zero(c):
            continue
        f = dom.mul(c, inv_lead)
        q[i - dn] = f
        for j, dc in enumerate(den):
            num[i - dn + j] = dom.sub(num[i - dn + j], dom.mul(f, dc))
    while num and dom.is_zero(num[-1]):
        num.pop()
    return q, num


def uni_gcd(a_coeffs, b_coeffs, dom):
    """Monic gcd of dense univariate coefficient lists."""
    a, b = list(a_coeffs), list(b_coeffs)
    while a and dom.is_zero(a[-1]):
        a.pop()
    while b and dom.is_zero(b[-1]):
        b.pop()
    while b:
        _, r = _uni_divmod(a, b, dom)
        a, b = b, r
    if not a:
        return [dom.one]
    inv = dom.inv(a[-1])
    return [dom.mul(c, inv) for c in a]


def poly_from_uni(ring, var_index, coeffs):
    n = len(ring.names)
    terms = {}
    for k, c in enumerate(coeffs):
        if ring.domain.is_zero(c):
            continue
        e = tuple(k if j == var_index else 0 for j in range(n))
        terms[e] = c
    return Poly(ring, terms)


def uni_exact_div(a, b, dom):
    q, r = _uni_divmod(a, b, dom)
    if r:
        raise DivisionByNoninvertible("inexact univariate division")
    return q
