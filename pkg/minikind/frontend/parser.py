from __future__ import annotations

from typing import Callable, List, Optional, Sequence

from minikind.errors import ParseError
from minikind.frontend.ast import (
    Arrow,
    Assertion,
    Binary,
    BoolLit,
    Call,
    Equation,
    Expr,
    IfThenElse,
    IntLit,
    NodeDecl,
    Pre,
    Program,
    PropertyPragma,
    RealLit,
    Unary,
    VarDecl,
    VarRef,
)
from minikind.frontend.lexer import Token, TokenKind, lex
from minikind.frontend.span import SourceSpan
from minikind.term.term import Sort

TYPE_TOKENS = {
    TokenKind.TYPE_INT: Sort.INT,
    TokenKind.TYPE_REAL: Sort.REAL,
    TokenKind.TYPE_BOOL: Sort.BOOL,
}

COMPARISON_TOKENS = {
    TokenKind.EQ: "=",
    TokenKind.NEQ: "<>",
    TokenKind.LT: "<",
    TokenKind.LE: "<=",
    TokenKind.GT: ">",
    TokenKind.GE: ">=",
}
ADDITIVE_TOKENS = {TokenKind.PLUS: "+", TokenKind.MINUS: "-"}
MULTIPLICATIVE_TOKENS = {
    TokenKind.STAR: "*",
    TokenKind.SLASH: "/",
    TokenKind.DIV: "div",
    TokenKind.MOD: "mod",
}
OR_TOKENS = {TokenKind.OR: "or", TokenKind.XOR: "xor"}


class Parser:
    """Recursive descent over the token list; stops at the first error."""

    def __init__(self, tokens: Sequence[Token]):
        self.tokens = list(tokens)
        self.pos = 0

    # token plumbing

    def peek(self, offset: int = 0) -> Optional[Token]:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def at(self, *kinds: TokenKind) -> bool:
        token = self.peek()
        return token is not None and token.kind in kinds

    def error(self, expected: Sequence[str]) -> ParseError:
        token = self.peek()
        if token is None:
            last = self.tokens[-1].span if self.tokens else None
            span = (
                SourceSpan(last.file, last.end_line, last.end_col, last.end_line, last.end_col)
                if last is not None
                else None
            )
            return ParseError(span, expected, "end of input")
        return ParseError(token.span, expected, f"'{token.text}'")

    def expect(self, kind: TokenKind) -> Token:
        token = self.peek()
        if token is None or token.kind is not kind:
            raise self.error([kind.value])
        self.pos += 1
        return token

    def accept(self, kind: TokenKind) -> Optional[Token]:
        if self.at(kind):
            return self.expect(kind)
        return None

    def span_since(self, start: Token) -> SourceSpan:
        return start.span.to(self.tokens[self.pos - 1].span)

    # declarations

    def parse_program(self) -> Program:
        nodes: List[NodeDecl] = []
        while self.peek() is not None:
            nodes.append(self.parse_node())
        if not nodes:
            raise self.error([TokenKind.NODE.value])
        marked = [node.name for node in nodes if node.is_main]
        if marked:
            main = marked[0]
        elif any(node.name == "main" for node in nodes):
            main = "main"
        else:
            main = nodes[-1].name
        return Program(nodes=tuple(nodes), main=main)

    def parse_node(self) -> NodeDecl:
        start = self.expect(TokenKind.NODE)
        name = self.expect(TokenKind.IDENT).text
        self.expect(TokenKind.LPAREN)
        inputs = self.parse_params(TokenKind.RPAREN)
        self.expect(TokenKind.RPAREN)
        self.expect(TokenKind.RETURNS)
        self.expect(TokenKind.LPAREN)
        outputs = self.parse_params(TokenKind.RPAREN)
        self.expect(TokenKind.RPAREN)
        self.accept(TokenKind.SEMI)
        locals_: List[VarDecl] = []
        if self.accept(TokenKind.VAR):
            while self.at(TokenKind.IDENT):
                locals_.extend(self.parse_var_group())
                self.expect(TokenKind.SEMI)
        self.expect(TokenKind.LET)
        equations: List[Equation] = []
        assertions: List[Assertion] = []
        properties: List[PropertyPragma] = []
        is_main = False
        while not self.at(TokenKind.TEL):
            item_start = self.peek()
            if item_start is None:
                raise self.error([TokenKind.TEL.value])
            if self.accept(TokenKind.PRAGMA_MAIN):
                self.accept(TokenKind.SEMI)
                is_main = True
            elif self.accept(TokenKind.PRAGMA_PROPERTY):
                expr = self.parse_expr()
                self.expect(TokenKind.SEMI)
                properties.append(PropertyPragma(expr, span=self.span_since(item_start)))
            elif self.accept(TokenKind.ASSERT):
                expr = self.parse_expr()
                self.expect(TokenKind.SEMI)
                assertions.append(Assertion(expr, span=self.span_since(item_start)))
            elif self.at(TokenKind.IDENT):
                lhs = self.expect(TokenKind.IDENT).text
                self.expect(TokenKind.EQ)
                rhs = self.parse_expr()
                self.expect(TokenKind.SEMI)
                equations.append(Equation(lhs, rhs, span=self.span_since(item_start)))
            else:
                raise self.error(
                    [
                        TokenKind.IDENT.value,
                        TokenKind.ASSERT.value,
                        TokenKind.PRAGMA_PROPERTY.value,
                        TokenKind.PRAGMA_MAIN.value,
                        TokenKind.TEL.value,
                    ]
                )
        self.expect(TokenKind.TEL)
        self.accept(TokenKind.SEMI)
        return NodeDecl(
            name=name,
            inputs=tuple(inputs),
            outputs=tuple(outputs),
            locals=tuple(locals_),
            equations=tuple(equations),
            assertions=tuple(assertions),
            properties=tuple(properties),
            is_main=is_main,
            span=self.span_since(start),
        )

    def parse_params(self, closing: TokenKind) -> List[VarDecl]:
        params: List[VarDecl] = []
        while self.at(TokenKind.IDENT):
            params.extend(self.parse_var_group())
            if not self.accept(TokenKind.SEMI):
                break
        if not self.at(closing):
            raise self.error([TokenKind.IDENT.value, closing.value])
        return params

    def parse_var_group(self) -> List[VarDecl]:
        names = [self.expect(TokenKind.IDENT)]
        while self.accept(TokenKind.COMMA):
            names.append(self.expect(TokenKind.IDENT))
        self.expect(TokenKind.COLON)
        token = self.peek()
        if token is None or token.kind not in TYPE_TOKENS:
            raise self.error([kind.value for kind in TYPE_TOKENS])
        self.pos += 1
        return [VarDecl(name.text, TYPE_TOKENS[token.kind], span=name.span) for name in names]

    # expressions, lowest precedence first

    def parse_expr(self) -> Expr:
        return self.parse_arrow()

    def parse_arrow(self) -> Expr:
        start = self.peek()
        first = self.parse_implies()
        if self.accept(TokenKind.ARROW):
            rest = self.parse_arrow()
            return Arrow(first, rest, span=self.span_since(start))  # type: ignore[arg-type]
        return first

    def parse_implies(self) -> Expr:
        start = self.peek()
        left = self.parse_or()
        if self.accept(TokenKind.IMPLIES):
            right = self.parse_implies()
            return Binary("=>", left, right, span=self.span_since(start))  # type: ignore[arg-type]
        return left

    def _left_assoc(self, operand: Callable[[], Expr], ops: dict) -> Expr:
        start = self.peek()
        left = operand()
        while self.at(*ops):
            op = ops[self.expect(self.peek().kind).kind]  # type: ignore[union-attr]
            right = operand()
            left = Binary(op, left, right, span=self.span_since(start))  # type: ignore[arg-type]
        return left

    def parse_or(self) -> Expr:
        return self._left_assoc(self.parse_and, OR_TOKENS)

    def parse_and(self) -> Expr:
        return self._left_assoc(self.parse_not, {TokenKind.AND: "and"})

    def parse_not(self) -> Expr:
        start = self.peek()
        if self.accept(TokenKind.NOT):
            operand = self.parse_not()
            return Unary("not", operand, span=self.span_since(start))  # type: ignore[arg-type]
        return self.parse_comparison()

    def parse_comparison(self) -> Expr:
        start = self.peek()
        left = self.parse_additive()
        if self.at(*COMPARISON_TOKENS):
            op = COMPARISON_TOKENS[self.expect(self.peek().kind).kind]  # type: ignore[union-attr]
            right = self.parse_additive()
            return Binary(op, left, right, span=self.span_since(start))  # type: ignore[arg-type]
        return left

    def parse_additive(self) -> Expr:
        return self._left_assoc(self.parse_multiplicative, ADDITIVE_TOKENS)

    def parse_multiplicative(self) -> Expr:
        return self._left_assoc(self.parse_unary, MULTIPLICATIVE_TOKENS)

    def parse_unary(self) -> Expr:
        start = self.peek()
        if self.accept(TokenKind.MINUS):
            operand = self.parse_unary()
            return Unary("-", operand, span=self.span_since(start))  # type: ignore[arg-type]
        if self.accept(TokenKind.PRE):
            operand = self.parse_unary()
            return Pre(operand, span=self.span_since(start))  # type: ignore[arg-type]
        return self.parse_primary()

    def parse_primary(self) -> Expr:
        token = self.peek()
        if token is None:
            raise self.error(["expression"])
        if token.kind is TokenKind.INT:
            self.pos += 1
            return IntLit(token.value, span=token.span)  # type: ignore[arg-type]
        if token.kind is TokenKind.REAL:
            self.pos += 1
            return RealLit(token.value, span=token.span)  # type: ignore[arg-type]
        if token.kind is TokenKind.BOOL:
            self.pos += 1
            return BoolLit(token.value, span=token.span)  # type: ignore[arg-type]
        if token.kind is TokenKind.IDENT:
            self.pos += 1
            if self.accept(TokenKind.LPAREN):
                args: List[Expr] = []
                if not self.at(TokenKind.RPAREN):
                    args.append(self.parse_expr())
                    while self.accept(TokenKind.COMMA):
                        args.append(self.parse_expr())
                self.expect(TokenKind.RPAREN)
                return Call(token.text, tuple(args), span=self.span_since(token))
            return VarRef(token.text, span=token.span)
        if token.kind is TokenKind.LPAREN:
            self.pos += 1
            inner = self.parse_expr()
            self.expect(TokenKind.RPAREN)
            return inner
        if token.kind is TokenKind.IF:
            self.pos += 1
            cond = self.parse_expr()
            self.expect(TokenKind.THEN)
            then = self.parse_expr()
            self.expect(TokenKind.ELSE)
            orelse = self.parse_expr()
            return IfThenElse(cond, then, orelse, span=self.span_since(token))
        raise self.error(["expression"])


def parse(tokens: Sequence[Token]) -> Program:
    return Parser(tokens).parse_program()


def parse_expression(tokens: Sequence[Token]) -> Expr:
    parser = Parser(tokens)
    expr = parser.parse_expr()
    if parser.peek() is not None:
        raise parser.error(["end of input"])
    return expr


def parse_source(source: str, file: str = "<input>") -> Program:
    return parse(lex(source, file))


def parse_expression_source(source: str, file: str = "<input>") -> Expr:
    return parse_expression(lex(source, file))
