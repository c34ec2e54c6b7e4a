"""
Recursive-descent parser for the scalar and element grammar
"""

import re
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Tuple

from ddbar.core.exceptions import ParseError, ScalarDivisionError, ScalarSyntaxError
from ddbar.models.scalars import Scalar

RESERVED = ("i", "lambda")

_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # number | name | op | end
    text: str
    offset: int


@dataclass(frozen=True)
class Node:
    """Expression tree node; ``args`` holds children or a literal"""

    op: str
    args: Tuple[Any, ...]
    offset: int


def _locate(source: str, offset: int) -> Tuple[int, int]:
    line = source.count("\n", 0, offset) + 1
    column = offset - (source.rfind("\n", 0, offset) + 1) + 1
    return line, column


def tokenize(source: str, error: type = ParseError) -> List[Token]:
    tokens = []
    position = 0
    while True:
        while position < len(source) and source[position].isspace():
            position += 1
        if position >= len(source):
            break
        match = _TOKEN.match(source, position)
        if match is None or match.end() == position:
            line, column = _locate(source, position)
            raise error(f"unexpected character {source[position]!r}", line, column)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(Token(kind, match.group(kind), start))
        position = match.end()
    tokens.append(Token("end", "", len(source)))
    return tokens


class ExpressionParser:
    """expr := term (('+'|'-') term)*; term := unary (('*'|'/') unary)*;
    unary := '-' unary | power; power := atom ('^' '-'? number)?"""

    def __init__(self, source: str, error: type = ParseError):
        self.source = source
        self.error = error
        self.tokens = tokenize(source, error)
        self.position = 0

    def fail(self, message: str, token: Optional[Token] = None) -> None:
        token = token or self.peek()
        line, column = _locate(self.source, token.offset)
        raise self.error(message, line, column)

    def peek(self) -> Token:
        return self.tokens[self.position]

    def advance(self) -> Token:
        token = self.tokens[self.position]
        self.position += 1
        return token

    def accept(self, text: str) -> Optional[Token]:
        token = self.peek()
        if token.kind == "op" and token.text == text:
            return self.advance()
        return None

    def parse(self) -> Node:
        if self.peek().kind == "end":
            self.fail("empty expression")
        node = self.expression()
        if self.peek().kind != "end":
            self.fail(f"unexpected token {self.peek().text!r}")
        return node

    def expression(self) -> Node:
        node = self.term()
        while True:
            token = self.peek()
            if self.accept("+"):
                node = Node("add", (node, self.term()), token.offset)
            elif self.accept("-"):
                node = Node("sub", (node, self.term()), token.offset)
            else:
                return node

    def term(self) -> Node:
        node = self.unary()
        while True:
            token = self.peek()
            if self.accept("*"):
                node = Node("mul", (node, self.unary()), token.offset)
            elif self.accept("/"):
                node = Node("div", (node, self.unary()), token.offset)
            else:
                return node

    def unary(self) -> Node:
        token = self.peek()
        if self.accept("-"):
            return Node("neg", (self.unary(),), token.offset)
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Node:
        node = self.atom()
        token = self.peek()
        if self.accept("^"):
            sign = -1 if self.accept("-") else 1
            exponent = self.peek()
            if exponent.kind != "number":
                self.fail("exponent must be an integer literal")
            self.advance()
            node = Node("pow", (node, sign * int(exponent.text)), token.offset)
        return node

    def atom(self) -> Node:
        token = self.peek()
        if token.kind == "number":
            self.advance()
            return Node("num", (int(token.text),), token.offset)
        if token.kind == "name":
            self.advance()
            if token.text in RESERVED:
                return Node(token.text, (), token.offset)
            return Node("name", (token.text,), token.offset)
        if self.accept("("):
            node = self.expression()
            if not self.accept(")"):
                self.fail("expected ')'")
            return node
        if token.kind == "end":
            self.fail("unexpected end of expression")
        self.fail(f"unexpected token {token.text!r}")
        raise AssertionError("unreachable")


def _mentions_names(node: Node) -> bool:
    if node.op == "name":
        return True
    return any(isinstance(arg, Node) and _mentions_names(arg) for arg in node.args)


def parse_expression(source: str, error: type = ParseError) -> Node:
    return ExpressionParser(source, error).parse()


class Evaluator:
    """Folds a parse tree; ``symbol`` resolves generator names"""

    def __init__(
        self,
        source: str,
        constant: Callable[[Scalar], Any],
        symbol: Optional[Callable[[str], Any]] = None,
        error: type = ParseError,
    ):
        self.source = source
        self.constant = constant
        self.symbol = symbol
        self.error = error

    def fail(self, message: str, node: Node) -> None:
        line, column = _locate(self.source, node.offset)
        raise self.error(message, line, column)

    def scalar(self, node: Node) -> Scalar:
        op = node.op
        if op == "num":
            return Scalar(node.args[0])
        if op == "i":
            return Scalar.i()
        if op == "lambda":
            return Scalar.lam()
        if op == "name":
            self.fail(f"generator {node.args[0]!r} not allowed in a scalar", node)
        if op == "neg":
            return -self.scalar(node.args[0])
        if op == "pow":
            base = self.scalar(node.args[0])
            return self._guard(lambda: base ** node.args[1], node)
        left, right = self.scalar(node.args[0]), self.scalar(node.args[1])
        if op == "add":
            return left + right
        if op == "sub":
            return left - right
        if op == "mul":
            return left * right
        return self._guard(lambda: left / right, node)

    def value(self, node: Node) -> Any:
        if self.symbol is None or not _mentions_names(node):
            return self.constant(self.scalar(node))
        op = node.op
        if op == "name":
            try:
                return self.symbol(node.args[0])
            except KeyError:
                self.fail(f"unknown generator {node.args[0]!r}", node)
        if op == "neg":
            return -self.value(node.args[0])
        if op == "pow":
            if node.args[1] < 0:
                self.fail("negative exponent on an algebra element", node)
            base = self.value(node.args[0])
            return base ** node.args[1]
        if op == "div":
            return self.value(node.args[0]) * self._guard(
                lambda: self.scalar(node.args[1]).inverse(), node
            )
        left, right = self.value(node.args[0]), self.value(node.args[1])
        if op == "add":
            return left + right
        if op == "sub":
            return left - right
        return left * right

    def _guard(self, thunk: Callable[[], Scalar], node: Node) -> Scalar:
        try:
            return thunk()
        except ZeroDivisionError:
            line, column = _locate(self.source, node.offset)
            raise ScalarDivisionError(f"division by zero (line {line}, column {column})")


def evaluate_scalar(source: str) -> Scalar:
    tree = parse_expression(source, ScalarSyntaxError)
    return Evaluator(source, lambda s: s, error=ScalarSyntaxError).scalar(tree)


def evaluate(source: str, constant: Callable[[Scalar], Any], symbol: Callable[[str], Any]) -> Any:
    """Evaluate an element expression against an algebra's generators"""
    tree = parse_expression(source)
    return Evaluator(source, constant, symbol).value(tree)
