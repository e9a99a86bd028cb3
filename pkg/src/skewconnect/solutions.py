"""Truncated formal fundamental solutions in generalized Newton bases.

For a direction with endomorphism sigma and base point a, the basis
polynomials are

    B_n(z) = prod_{j=0}^{n-1} (z - sigma^j(a)),

so B_0 = 1 and B_n(a) = 0 for n >= 1.  They satisfy the recursion
delta B_n = [n] B_{n-1} where [n] = n for identity and shift directions
and [n] = 1 + q + ... + q^(n-1) for a dilation of ratio q.  Identity
directions recover ordinary Taylor expansions, shifts give Newton
series, dilations their q-analogue; at a = 0 the dilation basis is the
monomial basis.

Coefficients of a function are

    alpha_n = [ (prod_i delta_i^{n_i} / [n_i]!) f ] evaluated at a,

and the truncated fundamental matrix of a system with derivation
matrices G_i is Y = sum_n C_n(a) prod_i B_{n_i}(z_i) where the C_n
follow the recursion [n_i + 1] C_(n + e_i) = delta_i(C_n) + sigma_i(C_n) G_i
from C_0 = I.  Built matrices are certified: every direction residual
has vanishing coefficients through total order N-2.
"""

from .connection import LinearSystem
from .curvature import is_integrable
from .errors import (
    DivisionByNoninvertible,
    NotIntegrable,
    NotOrdinary,
    SingularDivisor,
    SolutionsError,
    SubstitutionSingular,
)
from .exactalg import HSeries, Matrix
from .sigma import DirectionKind, SigmaBase


class NewtonBasis:
    """Basis B_n and rates [n] for one direction at one base point."""

    def __init__(self, base: SigmaBase, direction, point):
        self.base = base
        self.direction = base.direction_index(direction)
        kind = base.directions[self.direction].kind
        if kind is DirectionKind.ENDOMORPHISM:
            raise SolutionsError("general endomorphism directions have no Newton basis")
        self.kind = kind
        self.point = base.tower.coerce(point)
        self._elements = [base.tower.one()]
        self._grid = [self.point]
        self._rates = [base.tower.zero()]

    def grid(self, j):
        """The j-th orbit point of the base point under sigma."""
        while len(self._grid) <= j:
            self._grid.append(self.base.orbit_point(self.direction, self.point, len(self._grid)))
        return self._grid[j]

    def element(self, n):
        """B_n, a polynomial of degree n in the direction variable."""
        t = self.base.tower
        z = t.var(self.base.directions[self.direction].variable)
        while len(self._elements) <= n:
            j = len(self._elements) - 1
            self._elements.append(self._elements[-1] * (z - self.grid(j)))
        return self._elements[n]

    def rate(self, n):
        """[n]: n for identity/shift, the q-integer for dilations."""
        t = self.base.tower
        while len(self._rates) <= n:
            k = len(self._rates)
            if self.kind is DirectionKind.DILATION:
                q = t.coerce(self.base.directions[self.direction].parameter)
                self._rates.append(self._rates[-1] * q + t.one())
            else:
                self._rates.append(t.from_int(k))
        return self._rates[n]

    def rate_factorial(self, n):
        out = self.base.tower.one()
        for k in range(1, n + 1):
            out = out * self.rate(k)
        return out


class NewtonChart:
    """Joint Newton bases of several directions at a common point.

    ``point`` maps direction variables to scalar values; directions not
    mentioned are left symbolic (their variables become parameters).
    """

    def __init__(self, base: SigmaBase, point):
        self.base = base
        if not isinstance(point, dict):
            point = {d.variable: v for d, v in zip(base.directions, point)}
        self.point = {}
        self.bases = {}
        for var, value in point.items():
            i = base.direction_index(var)
            self.bases[i] = NewtonBasis(base, i, value)
            self.point[i] = self.bases[i].point
        self.keys = sorted(self.bases)

    def evaluate(self, x):
        """Evaluate a tower element at the chart point (NOT_ORDINARY on failure)."""
        if isinstance(x, Matrix):
            return x.map_entries(self.evaluate)
        t = self.base.tower
        try:
            for i in self.keys:
                v = self.base.var_index(i)
                a = self.point[i]
                if isinstance(x, HSeries):
                    x = x.subst_affine(v, t.zero(), a)
                else:
                    x = x.subst_frac(v, a)
            return x
        except DivisionByNoninvertible as e:
            raise NotOrdinary(f"evaluation at the base point fails: {e}") from e

    def basis_product(self, n):
        out = self.base.tower.one()
        for i, k in zip(self.keys, n):
            out = out * self.bases[i].element(k)
        return out

    def rate_factorial(self, n):
        out = self.base.tower.one()
        for i, k in zip(self.keys, n):
            out = out * self.bases[i].rate_factorial(k)
        return out

    def _delta_iterates(self, f, total):
        """Cache delta^n f for all multi-indices with |n| <= total."""
        m = len(self.keys)
        cache = {(0,) * m: f}
        for t in range(1, total + 1):
            for n in compositions(t, m):
                pos = next(k for k in range(m) if n[k] > 0)
                prev = n[:pos] + (n[pos] - 1,) + n[pos + 1 :]
                try:
                    cache[n] = self.base.delta(self.keys[pos], cache[prev])
                except (DivisionByNoninvertible, SubstitutionSingular) as e:
                    raise NotOrdinary(f"iterated delta fails: {e}") from e
        return cache

    def coefficient(self, f, n):
        """The generalized Taylor coefficient alpha_n of f."""
        n = tuple(n)
        cache = self._delta_iterates(f, sum(n))
        return self.evaluate(cache[n]) / self.rate_factorial(n)

    def coefficients_upto(self, f, total):
        """All alpha_n with |n| <= total, as a dict."""
        cache = self._delta_iterates(f, total)
        out = {}
        for n, g in cache.items():
            out[n] = self.evaluate(g) / self.rate_factorial(n)
        return out


def compositions(total, parts):
    """Weak compositions of ``total`` into ``parts`` slots, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for rest in compositions(total - head, parts - 1):
            yield (head,) + rest


def coefficient_extract(base, point, f, n):
    """alpha_n of f in the joint Newton basis at ``point``."""
    return NewtonChart(base, point).coefficient(f, n)


class FundamentalMatrix:
    """Truncated fundamental solution: Y(a) = I, coefficients by multi-index."""

    def __init__(self, system, chart, order, coefficients):
        self.system = system
        self.chart = chart
        self.order = order
        self.coefficients = coefficients

    def assembled(self) -> Matrix:
        t = self.system.base.tower
        acc = Matrix.zeros(t, self.system.rank, self.system.rank)
        for n, C in sorted(self.coefficients.items()):
            acc = acc + C.scale(self.chart.basis_product(n))
        return acc

    def columns(self):
        Y = self.assembled()
        return [Y.column(j) for j in range(Y.cols)]

    def residual_coefficients(self, key, upto):
        """Per-entry Newton coefficients of the residual in one direction."""
        R = self.system.residual(self.assembled(), key)
        out = {}
        for r in range(R.rows):
            for c in range(R.cols):
                out[(r, c)] = self.chart.coefficients_upto(R.data[r][c], upto)
        return out

    def certify(self):
        """Check the defining property: residual coefficients vanish through N-2."""
        t = self.system.base.tower
        for key in self.system.directions():
            coeffs = self.residual_coefficients(key, max(self.order - 2, 0))
            for entry, table in coeffs.items():
                for n, value in table.items():
                    if not t.is_zero(value):
                        raise SolutionsError(
                            f"residual coefficient {n} of entry {entry} in direction {key} is {value}"
                        )
        return True

    def to_json_dict(self):
        t = self.system.base.tower
        coeffs = {}
        for n, C in sorted(self.coefficients.items()):
            coeffs[",".join(map(str, n))] = C.to_strings()
        return {
            "rank": self.system.rank,
            "order": self.order,
            "point": {
                self.system.base.directions[i].variable: t.canonical_str(v)
                for i, v in sorted(self.chart.point.items())
            },
            "coefficients": coeffs,
        }


def fundamental_matrix(system: LinearSystem, point, order, *, direction_order=None, certify=True):
    """Unique truncated fundamental matrix with Y(a) = I.

    ``point`` assigns a scalar to each acting direction's variable; a
    multi-direction system must be integrable.  The coefficient
    recursion is [n_i+1] C_(n+e_i) = delta_i(C_n) + sigma_i(C_n) G_i,
    evaluated at the point.
    """
    base = system.base
    t = base.tower
    keys = system.directions()
    if direction_order is not None:
        ordered = [base.direction_index(k) for k in direction_order]
        if sorted(ordered) != keys:
            raise SolutionsError("direction_order must enumerate the acting directions")
    else:
        ordered = keys
    if len(keys) > 1 and not is_integrable(system):
        raise NotIntegrable("multi-direction system fails the integrability criterion")
    if not isinstance(point, dict):
        point = {base.directions[i].variable: v for i, v in zip(keys, point)}
    chart = NewtonChart(base, point)
    if sorted(chart.keys) != keys:
        raise SolutionsError("point must cover exactly the acting directions")
    quotients = {i: system.quotient_matrix(i) for i in keys}
    m = len(keys)
    pos_of = {i: chart.keys.index(i) for i in keys}
    ident = Matrix.identity(t, system.rank)
    sym = {(0,) * m: ident}
    coefficients = {(0,) * m: chart.evaluate(ident)}
    for total in range(1, order):
        for n in compositions(total, m):
            inc = next(i for i in ordered if n[pos_of[i]] > 0)
            pos = pos_of[inc]
            prev = n[:pos] + (n[pos] - 1,) + n[pos + 1 :]
            prev_mat = sym[prev]
            try:
                num = base.delta(inc, prev_mat) + base.sigma(inc, prev_mat) * quotients[inc]
                rate = chart.bases[inc].rate(n[pos])
                sym[n] = num.scale(t.inv(rate))
            except (DivisionByNoninvertible, SubstitutionSingular) as e:
                raise SingularDivisor(f"coefficient recursion fails at {n}: {e}") from e
            coefficients[n] = chart.evaluate(sym[n])
    fm = FundamentalMatrix(system, chart, order, coefficients)
    if certify:
        fm.certify()
    return fm


def horizontal_sections(system, point, order, **kw):
    """Basis of truncated horizontal columns: the fundamental matrix columns."""
    return fundamental_matrix(system, point, order, **kw).columns()


def horizontality_report(system, Y, point, order):
    """Check Y horizontal to ``order``: residual coefficients 0..order-1 vanish.

    Returns (ok, failures) where failures lists (direction, entry,
    multi_index, value_string) for the offending coefficients.
    """
    base = system.base
    chart = NewtonChart(base, point)
    t = base.tower
    failures = []
    for key in system.directions():
        R = system.residual(Y, key)
        for r in range(R.rows):
            for c in range(R.cols):
                table = chart.coefficients_upto(R.data[r][c], max(order - 1, 0))
                for n in sorted(table):
                    if not t.is_zero(table[n]):
                        failures.append(
                            (base.directions[key].variable, (r, c), n, t.canonical_str(table[n]))
                        )
    return (not failures), failures


def is_horizontal(system, Y, point, order):
    ok, _ = horizontality_report(system, Y, point, order)
    return ok
