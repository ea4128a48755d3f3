class QForgeError(Exception):
    pass


class DivisionByZero(QForgeError, ZeroDivisionError):
    pass


class EvaluationPole(QForgeError, ZeroDivisionError):
    pass


class InvalidArgument(QForgeError, ValueError):
    pass


class InvalidSubstitution(InvalidArgument):
    pass


class InsufficientTerms(InvalidArgument):
    pass


class NonUnitConstantTerm(QForgeError, ArithmeticError):
    pass


class OrderExceeded(QForgeError, IndexError):
    pass


class DenominatorDegeneracy(QForgeError, ZeroDivisionError):
    pass


class UnknownIdentity(QForgeError, LookupError):
    pass


class UnsupportedIdentity(QForgeError):
    pass


class UnboundVariable(QForgeError, LookupError):
    def __init__(self, name: str, line: int | None = None, column: int | None = None):
        self.name = name
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(f"{where}unbound variable '{name}'")

    def __str__(self) -> str:
        return self.args[0]


class ParseError(QForgeError):
    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        text = f"{line}:{column}: {message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(text)


class ArityError(ParseError):
    pass
