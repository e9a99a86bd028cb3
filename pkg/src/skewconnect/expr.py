"""Expression language for scalars and skew operators.

Grammar (integers, rationals a/b, names, + - * / ^ with integer
exponents, parentheses, X as the skew indeterminate, qpow(alpha) for
q^alpha):

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | power
    power  := atom ('^' signed_int)?
    atom   := integer | name | 'qpow' '(' expr ')' | '(' expr ')'

'^' binds tighter than '*' and unary '-'; '-' and '/' associate left.
Elaboration is non-commutative: X*a normalizes through the commutation
rule of the ambient skew ring.  The canonical printers for scalars and
operators emit strings this parser accepts (round-trip stable).
"""

from fractions import Fraction

from .errors import DivisionByNoninvertible, ParseError, UndefinedName
from .exactalg import TowerMode
from .sigma import DirectionKind, OreOperator, XAction

_OPS = set("+-*/^(),")


def tokenize(src):
    tokens = []
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            tokens.append(("int", src[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(("name", src[i:j], i))
            i = j
            continue
        if c in _OPS:
            tokens.append((c, c, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r}", position=i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, src):
        self.src = src
        self.tokens = tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", position=tok[2])
        return tok

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"trailing input {tok[1]!r}", position=tok[2])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.next()[0]
            rhs = self.factor()
            node = ("mul" if op == "*" else "div", node, rhs)
        return node

    def factor(self):
        if self.peek()[0] == "-":
            self.next()
            return ("neg", self.factor())
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[0] == "^":
            self.next()
            node = ("pow", node, self.signed_int())
        return node

    def signed_int(self):
        tok = self.peek()
        if tok[0] == "(":
            self.next()
            k = self.signed_int()
            self.expect(")")
            return k
        sign = 1
        if tok[0] == "-":
            self.next()
            sign = -1
            tok = self.peek()
        if tok[0] != "int":
            raise ParseError("exponent must be an integer", position=tok[2])
        self.next()
        return sign * int(tok[1])

    def atom(self):
        tok = self.next()
        if tok[0] == "int":
            return ("num", int(tok[1]))
        if tok[0] == "name":
            if self.peek()[0] == "(":
                if tok[1] != "qpow":
                    raise ParseError(f"unknown function {tok[1]!r}", position=tok[2])
                self.next()
                arg = self.expr()
                self.expect(")")
                return ("qpow", arg, tok[2])
            return ("name", tok[1], tok[2])
        if tok[0] == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected token {tok[1]!r}", position=tok[2])


def parse_expression(src):
    """Parse to an AST; raises ParseError with the failing position."""
    return _Parser(src).parse()


class ExprContext:
    """Names and the ambient skew ring for elaboration.

    ``direction`` may be None (scalar-only: X is rejected).  ``x_action``
    fixes what X means; when omitted, identity directions read X as the
    derivation and twisted directions as sigma.
    """

    def __init__(self, base, direction=None, x_action=None):
        self.base = base
        self.tower = base.tower
        if direction is None:
            self.direction = None
            self.flavor = None
        else:
            self.direction = base.direction_index(direction)
            if x_action is None:
                kind = base.directions[self.direction].kind
                x_action = (
                    XAction.SIGMA_DELTA if kind is DirectionKind.IDENTITY else XAction.SIGMA_ONLY
                )
            self.flavor = XAction(x_action)

    def names(self):
        t = self.tower
        env = {v: t.var(v) for v in t.variables}
        if t.mode in (TowerMode.EXACT_Q, TowerMode.H_TRUNC):
            env["q"] = t.q()
        if t.mode is TowerMode.H_TRUNC:
            env["h"] = t.h()
        if self.direction is not None:
            d = self.base.directions[self.direction]
            if d.kind in (DirectionKind.SHIFT, DirectionKind.DILATION):
                env["hbar" if d.kind is DirectionKind.SHIFT else "qratio"] = t.coerce(d.parameter)
        return env


def elaborate_scalar(node, ctx: ExprContext):
    """Evaluate an AST to a tower element (no X allowed)."""
    t = ctx.tower
    env = ctx.names()

    def walk(n):
        tag = n[0]
        if tag == "num":
            return t.from_int(n[1])
        if tag == "name":
            if n[1] == "X":
                raise ParseError("X is not allowed in a scalar expression", position=n[2])
            if n[1] not in env:
                raise UndefinedName(f"undefined name {n[1]!r}")
            return env[n[1]]
        if tag == "qpow":
            return t.q_power(_rational_value(n[1], t))
        if tag == "neg":
            return -walk(n[1])
        if tag == "pow":
            return walk(n[1]) ** n[2]
        a, b = walk(n[1]), walk(n[2])
        if tag == "add":
            return a + b
        if tag == "sub":
            return a - b
        if tag == "mul":
            return a * b
        if tag == "div":
            if not t.is_unit(b):
                raise DivisionByNoninvertible("division by a non-invertible scalar")
            return a / b
        raise ParseError(f"bad node {tag!r}")

    return walk(node)


def _rational_value(node, tower):
    tag = node[0]
    if tag == "num":
        return Fraction(node[1])
    if tag == "neg":
        return -_rational_value(node[1], tower)
    if tag == "div":
        return _rational_value(node[1], tower) / _rational_value(node[2], tower)
    if tag == "mul":
        return _rational_value(node[1], tower) * _rational_value(node[2], tower)
    if tag == "add":
        return _rational_value(node[1], tower) + _rational_value(node[2], tower)
    if tag == "sub":
        return _rational_value(node[1], tower) - _rational_value(node[2], tower)
    if tag == "pow":
        return _rational_value(node[1], tower) ** node[2]
    raise ParseError("qpow needs a rational-number argument")


def elaborate_operator(node, ctx: ExprContext):
    """Evaluate an AST to a skew operator, X acting per the context flavor."""
    if ctx.direction is None:
        raise ParseError("no direction fixed for an operator expression")
    base, i, flavor = ctx.base, ctx.direction, ctx.flavor
    t = ctx.tower
    env = ctx.names()

    def scalar_op(x):
        return OreOperator.scalar(base, i, flavor, x)

    def walk(n):
        tag = n[0]
        if tag == "num":
            return scalar_op(t.from_int(n[1]))
        if tag == "name":
            if n[1] == "X":
                return OreOperator.x(base, i, flavor)
            if n[1] not in env:
                raise UndefinedName(f"undefined name {n[1]!r}")
            return scalar_op(env[n[1]])
        if tag == "qpow":
            return scalar_op(t.q_power(_rational_value(n[1], t)))
        if tag == "neg":
            return -walk(n[1])
        if tag == "pow":
            body = walk(n[1])
            k = n[2]
            if k < 0:
                if body.degree != 0:
                    raise ParseError("negative power of an operator")
                return scalar_op(t.inv(body.coefficient(0)) ** (-k))
            return body**k
        a, b = walk(n[1]), walk(n[2])
        if tag == "add":
            return a + b
        if tag == "sub":
            return a - b
        if tag == "mul":
            return a * b
        if tag == "div":
            if b.degree != 0 or not t.is_unit(b.coefficient(0)):
                raise ParseError("division only by invertible scalars")
            return a.scale_left(t.inv(b.coefficient(0)))
        raise ParseError(f"bad node {tag!r}")

    return walk(node)


def parse_scalar(src, tower_or_base):
    base = tower_or_base
    if not hasattr(base, "tower"):
        from .sigma import SigmaBase

        base = SigmaBase(tower_or_base, [])
    return elaborate_scalar(parse_expression(src), ExprContext(base))


def parse_operator(src, base, direction, x_action=None):
    ctx = ExprContext(base, direction, x_action)
    return elaborate_operator(parse_expression(src), ctx)


def operator_str(op):
    return str(op)
