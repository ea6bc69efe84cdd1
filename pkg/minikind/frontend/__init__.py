from pathlib import Path
from typing import Union

from minikind.frontend.ast import Program, TypedProgram
from minikind.frontend.lexer import Token, TokenKind, lex
from minikind.frontend.parser import parse, parse_expression, parse_expression_source, parse_source
from minikind.frontend.printer import print_expr, print_program, print_term, term_to_expr
from minikind.frontend.span import SourceSpan
from minikind.frontend.typecheck import typecheck, typecheck_expression


def load_program(path: Union[str, Path]) -> TypedProgram:
    """Lex, parse and type-check one source file."""
    path = Path(path)
    source = path.read_text(encoding="utf-8")
    return typecheck(parse(lex(source, file=path.name)))
