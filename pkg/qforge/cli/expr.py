"""Expression language for `qforge expand`.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := 'q' ['^' int] | atom ['^' int]
    atom   := NUMBER | NAME | call | '(' expr ')'
    call   := FUNC '(' int (',' int)* [';' expr (',' expr)*] ')'
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from qforge.algebra.multipoly import VARIABLES, MultiPoly
from qforge.algebra.rational import q_power
from qforge.config import get_settings
from qforge.errors import ArityError, InvalidArgument, ParseError, UnboundVariable
from qforge.services.qcore import cauchy_P, phi_series, q_add_pow, qbinom, qpochhammer, ratio_coeff
from qforge.services.trivariate import F_poly, psi_poly


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Rat:
    value: Fraction


@dataclass(frozen=True)
class QPow:
    exponent: int


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    params: tuple[int, ...]
    args: tuple["Expr", ...]


Expr = Var | Rat | QPow | Pow | Neg | BinOp | Call

# name -> (integer parameters, symbolic slots); phi slots depend on its parameters
FUNCTIONS: dict[str, tuple[int, int | None]] = {
    "qpoch": (1, 1),
    "qbinom": (2, 0),
    "P": (1, 2),
    "qaddpow": (1, 2),
    "F": (1, 3),
    "psi": (1, 3),
    "phi": (3, None),
    "kernel": (1, 4),
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"(?P<NUMBER>\d+(?:/\d+)?)|(?P<NAME>[A-Za-z_][A-Za-z0-9_]*)|(?P<OP>[-+*/^(),;])|(?P<NEWLINE>\n)|(?P<SKIP>[ \t\r]+)|(?P<MISMATCH>.)"
)


def tokenize(text: str) -> Iterator[Token]:
    line, line_start = 1, 0
    for match in _TOKEN_RE.finditer(text):
        kind = match.lastgroup
        column = match.start() - line_start + 1
        if kind == "NEWLINE":
            line += 1
            line_start = match.end()
            continue
        if kind == "SKIP":
            continue
        if kind == "MISMATCH":
            raise ParseError(f"unexpected character {match.group()!r}", line, column)
        yield Token(kind, match.group(), line, column)
    yield Token("EOF", "", line, len(text) - line_start + 1)


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(tokenize(text))
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def at(self, *ops: str) -> bool:
        token = self.peek()
        return token.kind == "OP" and token.text in ops

    def fail(self, message: str, expected: tuple[str, ...]):
        token = self.peek()
        found = token.text or "end of input"
        raise ParseError(f"{message}, found {found!r}", token.line, token.column, expected)

    def expect(self, op: str, also: tuple[str, ...] = ()) -> Token:
        if not self.at(op):
            self.fail("unexpected token", (op, *also))
        return self.advance()

    def parse(self) -> Expr:
        node = self.expr()
        if self.peek().kind != "EOF":
            self.fail("unexpected token", ("+", "-", "*", "/", "end of input"))
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.at("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.at("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.at("-"):
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        token = self.peek()
        if token.kind == "NAME" and token.text == "q":
            self.advance()
            if self.at("^"):
                self.advance()
                return QPow(self.signed_int())
            return QPow(1)
        base = self.atom()
        if self.at("^"):
            self.advance()
            return Pow(base, self.signed_int())
        return base

    def signed_int(self) -> int:
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        return sign * self.integer()

    def integer(self) -> int:
        token = self.peek()
        if token.kind != "NUMBER" or "/" in token.text:
            self.fail("expected an integer", ("integer",))
        self.advance()
        return int(token.text)

    def atom(self) -> Expr:
        token = self.peek()
        if token.kind == "NUMBER":
            _, _, denominator = token.text.partition("/")
            if denominator and int(denominator) == 0:
                raise ParseError(f"zero denominator in {token.text!r}", token.line, token.column)
            self.advance()
            return Rat(Fraction(token.text))
        if self.at("("):
            self.advance()
            node = self.expr()
            self.expect(")", ("+", "-", "*", "/"))
            return node
        if token.kind == "NAME":
            if token.text in FUNCTIONS:
                return self.call()
            if token.text in VARIABLES:
                self.advance()
                return Var(token.text)
            raise UnboundVariable(token.text, token.line, token.column)
        self.fail("expected an operand", ("number", "name", "(", "-"))

    def call(self) -> Call:
        name_token = self.advance()
        name = name_token.text
        self.expect("(")
        params = [self.integer()]
        while self.at(","):
            self.advance()
            params.append(self.integer())
        args = []
        if self.at(";"):
            self.advance()
            args.append(self.expr())
            while self.at(","):
                self.advance()
                args.append(self.expr())
            self.expect(")", (",",))
        else:
            self.expect(")", (",", ";"))
        _check_arity(name, params, args, name_token)
        return Call(name, tuple(params), tuple(args))


def _check_arity(name: str, params: list[int], args: list[Expr], token: Token) -> None:
    n_params, n_slots = FUNCTIONS[name]
    if len(params) != n_params:
        raise ArityError(f"{name} takes {n_params} integer parameter(s), got {len(params)}", token.line, token.column)
    if name == "phi":
        n_slots = params[0] + params[1] + 1
    if len(args) != n_slots:
        raise ArityError(f"{name} takes {n_slots} argument(s), got {len(args)}", token.line, token.column)
    if name == "qbinom" and params[1] > params[0]:
        raise ArityError(f"qbinom({params[0]}, {params[1]}) needs k <= n", token.line, token.column)


def parse_expression(text: str) -> Expr:
    parser = _Parser(text)
    try:
        return parser.parse()
    except RecursionError:
        token = parser.peek()
        raise ParseError("expression nested too deeply", token.line, token.column) from None


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _PRECEDENCE[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow) or (isinstance(node, QPow) and node.exponent != 1):
        return 4
    if isinstance(node, Rat) and node.value.denominator != 1:
        return 4
    return 5


def _wrap(node: Expr, needed: int) -> str:
    text = render(node)
    return f"({text})" if _prec(node) < needed else text


def render(node: Expr) -> str:
    """Canonical text; parse_expression(render(node)) == node."""
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Rat):
        return str(node.value)
    if isinstance(node, QPow):
        return "q" if node.exponent == 1 else f"q^{node.exponent}"
    if isinstance(node, Pow):
        base = render(node.base)
        if _prec(node.base) < 5 or isinstance(node.base, QPow):
            base = f"({base})"
        return f"{base}^{node.exponent}"
    if isinstance(node, Neg):
        return f"-{_wrap(node.operand, 3)}"
    if isinstance(node, BinOp):
        prec = _PRECEDENCE[node.op]
        sep = "*" if node.op == "*" else f" {node.op} "
        return f"{_wrap(node.left, prec)}{sep}{_wrap(node.right, prec + 1)}"
    if isinstance(node, Call):
        params = ", ".join(str(p) for p in node.params)
        if not node.args:
            return f"{node.name}({params})"
        return f"{node.name}({params}; {', '.join(render(a) for a in node.args)})"
    raise InvalidArgument(f"not an expression node: {node!r}")


def evaluate(node: Expr) -> MultiPoly:
    if isinstance(node, Var):
        return MultiPoly.var(node.name)
    if isinstance(node, Rat):
        return MultiPoly.const(node.value)
    if isinstance(node, QPow):
        return MultiPoly.const(q_power(node.exponent))
    if isinstance(node, Pow):
        return evaluate(node.base) ** node.exponent
    if isinstance(node, Neg):
        return -evaluate(node.operand)
    if isinstance(node, BinOp):
        left, right = evaluate(node.left), evaluate(node.right)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if not right.is_constant or right.is_zero:
            raise InvalidArgument(f"can only divide by a nonzero scalar, got {right.render()}")
        return left / right
    if isinstance(node, Call):
        return _evaluate_call(node)
    raise InvalidArgument(f"not an expression node: {node!r}")


def _evaluate_call(node: Call) -> MultiPoly:
    params = node.params
    order = params[2] if node.name == "phi" else params[0]
    limit = get_settings().max_order
    if order > limit:
        raise InvalidArgument(f"{node.name} order {order} exceeds max_order={limit}")
    args = [evaluate(a) for a in node.args]
    if node.name == "qpoch":
        return qpochhammer(args[0], params[0])
    if node.name == "qbinom":
        return MultiPoly.const(qbinom(params[0], params[1]))
    if node.name == "P":
        return cauchy_P(params[0], *args)
    if node.name == "qaddpow":
        return q_add_pow(params[0], *args)
    if node.name == "F":
        return F_poly(params[0], *args)
    if node.name == "psi":
        return psi_poly(params[0], *args)
    if node.name == "kernel":
        return ratio_coeff(params[0], *args)
    r, s, order = params
    return phi_series(args[:r], args[r : r + s], args[-1], order).partial_sum()
