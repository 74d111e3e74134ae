"""Expressions of one real variable, parsed once and evaluated as order-3 jets.

Grammar (conventional precedence, ``^`` right-associative, no implicit
multiplication)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := primary ('^' unary)?
    primary := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

``NAME`` is the curve variable, a declared parameter, the constant ``pi``, or
a function from :data:`ruled_ricci.jet.FUNCTIONS`.  Anything else is rejected
while parsing.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Union

from . import jet as J
from .errors import ArityError, ExprSyntaxError, UnboundParameterError, UnknownIdentifierError
from .jet import Jet3

CONSTANTS = {"pi": math.pi}


# ----------------------------------------------------------------------- AST
@dataclass(frozen=True)
class Num:
    value: float
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Param:
    name: str
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Const:
    name: str
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"
    span: tuple[int, int] = field(default=(0, 0), compare=False)


Node = Union[Num, Var, Param, Const, Neg, BinOp, Call]


def to_source(node: Node) -> str:
    """Fully parenthesized source text; ``parse(to_source(n))`` reproduces ``n``."""
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, (Var, Param, Const)):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


# ------------------------------------------------------------------- lexing
_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # num | name | op | end
    text: str
    start: int  # byte offsets
    end: int


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    byte = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", byte)
        text = m.group()
        nbytes = len(text.encode("utf-8"))
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, text, byte, byte + nbytes))
        pos = m.end()
        byte += nbytes
    tokens.append(_Token("end", "", byte, byte))
    return tokens


class _Parser:
    def __init__(self, source: str, variable: str, parameters: Iterable[str]):
        self.tokens = _tokenize(source)
        self.i = 0
        self.variable = variable
        self.parameters = set(parameters)

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        if self.tok.text != text or self.tok.kind != "op":
            found = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            raise ExprSyntaxError(f"expected {text!r}, found {found}", self.tok.start)
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {self.tok.text!r}", self.tok.start)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            right = self.term()
            node = BinOp(op, node, right, (node.span[0], right.span[1]))
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            right = self.unary()
            node = BinOp(op, node, right, (node.span[0], right.span[1]))
        return node

    def unary(self) -> Node:
        if self.tok.kind == "op" and self.tok.text in "+-":
            tok = self.advance()
            operand = self.unary()
            if tok.text == "+":
                return operand
            return Neg(operand, (tok.start, operand.span[1]))
        return self.power()

    def power(self) -> Node:
        base = self.primary()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            exponent = self.unary()  # right-associative, allows 2^-1
            return BinOp("^", base, exponent, (base.span[0], exponent.span[1]))
        return base

    def primary(self) -> Node:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text), (tok.start, tok.end))
        if tok.kind == "name":
            self.advance()
            return self.name(tok)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ExprSyntaxError(f"expected an operand, found {found}", tok.start)

    def name(self, tok: _Token) -> Node:
        name = tok.text
        is_call = self.tok.kind == "op" and self.tok.text == "("
        if name in J.FUNCTIONS:
            if not is_call:
                raise ArityError(f"function {name!r} takes 1 argument, got 0", tok.start)
            self.advance()
            arg = self.expr()
            if self.tok.kind == "op" and self.tok.text == ",":
                nargs = 1
                while self.tok.kind == "op" and self.tok.text == ",":
                    self.advance()
                    self.expr()
                    nargs += 1
                raise ArityError(f"function {name!r} takes 1 argument, got {nargs}", tok.start)
            close = self.expect(")")
            return Call(name, arg, (tok.start, close.end))
        if is_call:
            if name == self.variable or name in self.parameters or name in CONSTANTS:
                raise ExprSyntaxError(f"{name!r} is not a function", tok.start)
            raise UnknownIdentifierError(f"unknown function {name!r}", tok.start)
        span = (tok.start, tok.end)
        if name == self.variable:
            return Var(name, span)
        if name in self.parameters:
            return Param(name, span)
        if name in CONSTANTS:
            return Const(name, span)
        raise UnknownIdentifierError(f"unknown identifier {name!r}", tok.start)


# --------------------------------------------------------------- evaluation
_Evaluator = Callable[[Jet3, Mapping[str, float]], Jet3]


def _compile(node: Node) -> _Evaluator:
    if isinstance(node, Num):
        value = node.value
        return lambda t, env: Jet3(value)
    if isinstance(node, Var):
        return lambda t, env: t
    if isinstance(node, Param):
        name = node.name
        return lambda t, env: Jet3(env[name])
    if isinstance(node, Const):
        value = CONSTANTS[node.name]
        return lambda t, env: Jet3(value)
    if isinstance(node, Neg):
        inner = _compile(node.operand)
        return lambda t, env: -inner(t, env)
    if isinstance(node, Call):
        fn = J.FUNCTIONS[node.func]
        arg = _compile(node.arg)
        return lambda t, env: fn(arg(t, env))
    if isinstance(node, BinOp):
        left, right = _compile(node.left), _compile(node.right)
        if node.op == "+":
            return lambda t, env: left(t, env) + right(t, env)
        if node.op == "-":
            return lambda t, env: left(t, env) - right(t, env)
        if node.op == "*":
            return lambda t, env: left(t, env) * right(t, env)
        if node.op == "/":
            return lambda t, env: left(t, env) / right(t, env)
        if node.op == "^":
            return lambda t, env: left(t, env) ** right(t, env)
    raise TypeError(f"not an expression node: {node!r}")


@dataclass(frozen=True)
class Expression:
    """Parsed, immutable expression; evaluation is reentrant."""

    source: str
    root: Node
    variable: str = "t"
    parameters: Mapping[str, float | None] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_fn", _compile(self.root))

    def free_symbols(self) -> set[str]:
        out: set[str] = set()
        stack: list[Node] = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, (Var, Param)):
                out.add(node.name)
            elif isinstance(node, Neg):
                stack.append(node.operand)
            elif isinstance(node, Call):
                stack.append(node.arg)
            elif isinstance(node, BinOp):
                stack.extend((node.left, node.right))
        return out

    def __call__(self, t: float, bindings: Mapping[str, float] | None = None) -> float:
        return eval_jet(self, t, bindings).d0


def parse(
    source: str,
    parameters: Mapping[str, float | None] | Iterable[str] | None = None,
    variable: str = "t",
) -> Expression:
    """Parse ``source`` into an :class:`Expression`.

    ``parameters`` declares the named constants the expression may use,
    either as a name-to-default mapping or a bare list of names (which then
    must be bound at evaluation time).
    """
    if not source or not source.strip():
        raise ExprSyntaxError("empty expression", 0)
    if parameters is None:
        params: dict[str, float | None] = {}
    elif isinstance(parameters, Mapping):
        params = {k: (None if v is None else float(v)) for k, v in parameters.items()}
    else:
        params = {k: None for k in parameters}
    for name in params:
        if name == variable or name in J.FUNCTIONS or name in CONSTANTS:
            raise ExprSyntaxError(f"parameter name {name!r} is reserved")
    root = _Parser(source, variable, params).parse()
    return Expression(source, root, variable, params)


def eval_jet(expr: Expression, t: float, bindings: Mapping[str, float] | None = None) -> Jet3:
    """Evaluate ``expr`` and its first three ``t``-derivatives at ``t``."""
    env: dict[str, float] = {k: v for k, v in expr.parameters.items() if v is not None}
    if bindings:
        env.update({k: float(v) for k, v in bindings.items() if k in expr.parameters})
    for name in expr.parameters:
        if name not in env:
            raise UnboundParameterError(f"parameter {name!r} has no value")
    return expr._fn(Jet3.variable(float(t)), env)  # type: ignore[attr-defined]
