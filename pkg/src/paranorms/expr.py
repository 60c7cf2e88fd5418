"""Expression ASTs for one-variable real functions.

The grammar covers what generator functions need: infix ``+ - * / ^`` with
the usual precedence, parentheses, ``exp(...)``, ``log(...)``, real literals
and the variable ``t``.  Exponents of ``^`` must fold to a constant so that
symbolic differentiation stays closed-form.
"""

from __future__ import annotations

import math

import numpy as np


class ExprError(Exception):
    """Base class for expression errors."""


class ParseError(ExprError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position
        self.reason = message


class EvalDomainError(ExprError):
    """Evaluation left the real domain (log of a nonpositive value, division
    by zero, overflow, ...)."""

    def __init__(self, message: str, subexpr: "Expr", t: float):
        super().__init__(f"{message} in '{to_text(subexpr)}' at t={t!r}")
        self.subexpr = subexpr
        self.t = t


class Expr:
    """Base AST node.  Nodes are immutable value objects."""

    __slots__ = ()
    arity = 0

    def children(self) -> tuple["Expr", ...]:
        return ()

    def __eq__(self, other):
        return type(self) is type(other) and self.key() == other.key()

    def __hash__(self):
        return hash((type(self).__name__, self.key()))

    def key(self):
        return self.children()

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(map(repr, self.children()))})"

    def __str__(self):
        return to_text(self)


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value: float):
        object.__setattr__(self, "value", float(value))

    def __setattr__(self, *a):
        raise AttributeError("Const is immutable")

    def key(self):
        return (self.value,)

    def __repr__(self):
        return f"Const({self.value!r})"


class Var(Expr):
    __slots__ = ()


class _Binary(Expr):
    __slots__ = ("a", "b")
    arity = 2

    def __init__(self, a: Expr, b: Expr):
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, *a):
        raise AttributeError("nodes are immutable")

    def children(self):
        return (self.a, self.b)


class _Unary(Expr):
    __slots__ = ("a",)
    arity = 1

    def __init__(self, a: Expr):
        object.__setattr__(self, "a", a)

    def __setattr__(self, *a):
        raise AttributeError("nodes are immutable")

    def children(self):
        return (self.a,)


class Add(_Binary):
    __slots__ = ()


class Sub(_Binary):
    __slots__ = ()


class Mul(_Binary):
    __slots__ = ()


class Div(_Binary):
    __slots__ = ()


class Pow(_Binary):
    """Power with a constant exponent; the parser and constructor enforce it."""

    __slots__ = ()

    def __init__(self, base: Expr, exponent: Expr):
        if not isinstance(exponent, Const):
            raise ExprError("pow exponent must be a constant subtree")
        super().__init__(base, exponent)

    @property
    def exponent(self) -> float:
        return self.b.value


class Exp(_Unary):
    __slots__ = ()


class Log(_Unary):
    __slots__ = ()


class Neg(_Unary):
    """Unary minus.  ``Neg(Const(c))`` folds to ``Const(-c)`` so that printing
    and reparsing a negative literal round-trips to the identical AST."""

    __slots__ = ()

    def __new__(cls, a: Expr):
        if isinstance(a, Const):
            return Const(-a.value)
        return super().__new__(cls)

    def __init__(self, a: Expr):
        if isinstance(a, Const):  # handled in __new__
            return
        super().__init__(a)


# ---------------------------------------------------------------------------
# tokenizer / parser

_OPS = set("+-*/^()")


def _tokenize(source: str):
    tokens = []
    i, n = 0, len(source)
    while i < n:
        c = source[i]
        if c.isspace():
            i += 1
            continue
        if c in _OPS:
            tokens.append((c, c, i))
            i += 1
            continue
        if c.isdigit() or c == ".":
            j = i
            while j < n and (source[j].isdigit() or source[j] == "."):
                j += 1
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    j = k
                    while j < n and source[j].isdigit():
                        j += 1
            text = source[i:j]
            try:
                value = float(text)
            except ValueError:
                raise ParseError(f"malformed number '{text}'", i) from None
            tokens.append(("num", value, i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(("name", source[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind, what):
        tok = self.take()
        if tok[0] != kind:
            raise ParseError(f"expected {what}, found {tok[1]!r}", tok[2])
        return tok

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.parse_term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def parse_term(self) -> Expr:
        node = self.parse_unary()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            rhs = self.parse_unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def parse_unary(self) -> Expr:
        if self.peek()[0] == "-":
            self.take()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        if self.peek()[0] == "^":
            tok = self.take()
            exponent = self.parse_unary()  # right associative
            folded = _fold_constant(exponent)
            if folded is None:
                raise ParseError("non-constant exponent", tok[2])
            return Pow(base, Const(folded))
        return base

    def parse_atom(self) -> Expr:
        kind, value, pos = self.take()
        if kind == "num":
            return Const(value)
        if kind == "name":
            if value == "t":
                return Var()
            if value in ("exp", "log"):
                self.expect("(", "'('")
                arg = self.parse_expr()
                self.expect(")", "')'")
                return Exp(arg) if value == "exp" else Log(arg)
            raise ParseError(f"unknown name '{value}' (expected t, exp or log)", pos)
        if kind == "(":
            node = self.parse_expr()
            self.expect(")", "')'")
            return node
        raise ParseError(f"expected a number, 't', 'exp', 'log' or '(', found {value!r}", pos)


def _fold_constant(e: Expr):
    """Value of a constant subtree, or None if it contains the variable."""
    s = simplify(e)
    return s.value if isinstance(s, Const) else None


def parse(source: str) -> Expr:
    """Parse an expression in the variable t.

    Raises ParseError with the byte offset and an expected-token message.
    """
    if not source or not source.strip():
        raise ParseError("empty expression", 0)
    parser = _Parser(_tokenize(source))
    node = parser.parse_expr()
    kind, value, pos = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected trailing input {value!r}", pos)
    return node


# ---------------------------------------------------------------------------
# printing

def _const_text(v: float) -> str:
    return repr(v)


def to_text(e: Expr) -> str:
    """Canonical fully parenthesized infix form; parse(to_text(e)) == e."""
    if isinstance(e, Const):
        return _const_text(e.value)
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Neg):
        return f"(-{to_text(e.a)})"
    if isinstance(e, Exp):
        return f"exp({to_text(e.a)})"
    if isinstance(e, Log):
        return f"log({to_text(e.a)})"
    sym = {Add: "+", Sub: "-", Mul: "*", Div: "/", Pow: "^"}[type(e)]
    return f"({to_text(e.a)} {sym} {to_text(e.b)})"


# ---------------------------------------------------------------------------
# evaluation

def evaluate(e: Expr, t: float) -> float:
    """Evaluate at a scalar t; raises EvalDomainError outside the domain."""
    t = float(t)
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return t
    if isinstance(e, Neg):
        return -evaluate(e.a, t)
    if isinstance(e, Exp):
        arg = evaluate(e.a, t)
        out = math.exp(arg) if arg < 709.8 else math.inf
        if not math.isfinite(out):
            raise EvalDomainError("overflow", e, t)
        return out
    if isinstance(e, Log):
        arg = evaluate(e.a, t)
        if arg <= 0.0:
            raise EvalDomainError(f"log of nonpositive value {arg!r}", e, t)
        return math.log(arg)
    a = evaluate(e.a, t)
    if isinstance(e, Pow):
        c = e.exponent
        if a < 0.0 and c != int(c):
            raise EvalDomainError("fractional power of negative base", e, t)
        if a == 0.0 and c < 0.0:
            raise EvalDomainError("zero base with negative exponent", e, t)
        try:
            out = a ** c
        except OverflowError:
            raise EvalDomainError("overflow", e, t) from None
        if not math.isfinite(out):
            raise EvalDomainError("overflow", e, t)
        return out
    b = evaluate(e.b, t)
    if isinstance(e, Add):
        out = a + b
    elif isinstance(e, Sub):
        out = a - b
    elif isinstance(e, Mul):
        out = a * b
    else:  # Div
        if b == 0.0:
            raise EvalDomainError("division by zero", e, t)
        out = a / b
    if not math.isfinite(out):
        raise EvalDomainError("overflow", e, t)
    return out


def evaluate_array(e: Expr, t: np.ndarray) -> np.ndarray:
    """Vectorized evaluation; out-of-domain entries become nan/inf silently."""
    t = np.asarray(t, dtype=float)
    with np.errstate(all="ignore"):
        return _eval_array(e, t)


def _eval_array(e: Expr, t: np.ndarray) -> np.ndarray:
    if isinstance(e, Const):
        return np.full(t.shape, e.value)
    if isinstance(e, Var):
        return t.copy()
    if isinstance(e, Neg):
        return -_eval_array(e.a, t)
    if isinstance(e, Exp):
        return np.exp(_eval_array(e.a, t))
    if isinstance(e, Log):
        a = _eval_array(e.a, t)
        return np.where(a > 0, np.log(np.where(a > 0, a, 1.0)), np.nan)
    a = _eval_array(e.a, t)
    if isinstance(e, Pow):
        return np.power(a, e.exponent)
    b = _eval_array(e.b, t)
    if isinstance(e, Add):
        return a + b
    if isinstance(e, Sub):
        return a - b
    if isinstance(e, Mul):
        return a * b
    return a / b  # Div


# ---------------------------------------------------------------------------
# differentiation and simplification

def differentiate(e: Expr) -> Expr:
    """Symbolic derivative with respect to t."""
    if isinstance(e, Const):
        return Const(0.0)
    if isinstance(e, Var):
        return Const(1.0)
    if isinstance(e, Neg):
        return Neg(differentiate(e.a))
    if isinstance(e, Exp):
        return Mul(Exp(e.a), differentiate(e.a))
    if isinstance(e, Log):
        return Div(differentiate(e.a), e.a)
    if isinstance(e, Pow):
        c = e.exponent
        return Mul(Mul(Const(c), Pow(e.a, Const(c - 1.0))), differentiate(e.a))
    da, db = differentiate(e.a), differentiate(e.b)
    if isinstance(e, Add):
        return Add(da, db)
    if isinstance(e, Sub):
        return Sub(da, db)
    if isinstance(e, Mul):
        return Add(Mul(da, e.b), Mul(e.a, db))
    # Div
    return Div(Sub(Mul(da, e.b), Mul(e.a, db)), Pow(e.b, Const(2.0)))


def _is_const(e: Expr, value=None) -> bool:
    return isinstance(e, Const) and (value is None or e.value == value)


def simplify(e: Expr) -> Expr:
    """Constant folding plus 0/1 identity elimination, bottom-up.

    Assumes in-domain evaluation: ``0 * x`` collapses to 0 even if x carries
    domain restrictions.  Never changes in-domain values beyond rounding.
    """
    if isinstance(e, (Const, Var)):
        return e
    kids = [simplify(c) for c in e.children()]

    if all(isinstance(k, Const) for k in kids):
        folded = _try_fold(e, kids)
        if folded is not None:
            return folded

    if isinstance(e, Neg):
        (a,) = kids
        if isinstance(a, Neg):
            return a.a
        return Neg(a)
    if isinstance(e, (Exp, Log)):
        return type(e)(kids[0])

    a, b = kids
    if isinstance(e, Add):
        if _is_const(a, 0.0):
            return b
        if _is_const(b, 0.0):
            return a
        return Add(a, b)
    if isinstance(e, Sub):
        if _is_const(b, 0.0):
            return a
        if _is_const(a, 0.0):
            return Neg(b)
        return Sub(a, b)
    if isinstance(e, Mul):
        if _is_const(a, 0.0) or _is_const(b, 0.0):
            return Const(0.0)
        if _is_const(a, 1.0):
            return b
        if _is_const(b, 1.0):
            return a
        return Mul(a, b)
    if isinstance(e, Div):
        if _is_const(a, 0.0) and not _is_const(b, 0.0):
            return Const(0.0)
        if _is_const(b, 1.0):
            return a
        return Div(a, b)
    # Pow
    if e.exponent == 1.0:
        return a
    if e.exponent == 0.0:
        return Const(1.0)
    return Pow(a, b)


def _try_fold(e: Expr, kids):
    """Fold a node whose children are constants, unless the value leaves the
    real domain (those nodes are kept so evaluation reports the error)."""
    try:
        if isinstance(e, Neg):
            v = -kids[0].value
        elif isinstance(e, Exp):
            v = math.exp(kids[0].value) if kids[0].value < 709.8 else math.inf
        elif isinstance(e, Log):
            if kids[0].value <= 0:
                return None
            v = math.log(kids[0].value)
        elif isinstance(e, Add):
            v = kids[0].value + kids[1].value
        elif isinstance(e, Sub):
            v = kids[0].value - kids[1].value
        elif isinstance(e, Mul):
            v = kids[0].value * kids[1].value
        elif isinstance(e, Div):
            if kids[1].value == 0:
                return None
            v = kids[0].value / kids[1].value
        elif isinstance(e, Pow):
            base, c = kids[0].value, kids[1].value
            if base < 0 and c != int(c):
                return None
            v = base ** c
        else:
            return None
    except (OverflowError, ValueError):
        return None
    if not math.isfinite(v):
        return None
    return Const(v)


def contains_exp(e: Expr) -> bool:
    """True if the tree contains an exp node (used for overflow guards)."""
    if isinstance(e, Exp):
        return True
    return any(contains_exp(c) for c in e.children())
