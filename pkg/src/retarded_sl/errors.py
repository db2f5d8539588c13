"""Exception hierarchy shared across the toolkit."""


class RetardedSLError(Exception):
    """Base class for all toolkit errors."""


class ExprSyntaxError(RetardedSLError, SyntaxError):
    """Malformed coefficient expression.

    ``pos`` is the 0-based character offset of the offending token.
    """

    def __init__(self, message: str, src: str = "", pos: int = 0):
        self.src = src
        self.pos = pos
        super().__init__(f"{message} at position {pos}")


class UnknownIdentifier(ExprSyntaxError):
    """A name that is neither ``x`` nor a whitelisted function/constant."""


class EvalDomainError(RetardedSLError, ArithmeticError):
    """Expression evaluated outside its real domain."""


class ValidationError(RetardedSLError, ValueError):
    """Problem data violates a structural constraint."""


class NonFiniteState(RetardedSLError, FloatingPointError):
    def __init__(self, x: float, mu: float):
        self.x = x
        self.mu = mu
        super().__init__(f"non-finite solution state at x={x!r} (mu={mu!r})")


class NoConvergence(RetardedSLError, RuntimeError):
    def __init__(self, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"fixed-point iteration did not converge after {iterations} "
            f"iterations (last sup-norm change {residual:.3e})"
        )


class MuZero(RetardedSLError, ValueError):
    """The integral-equation form divides by mu."""


class IndexingError(RetardedSLError):
    def __init__(self, label: str, candidates):
        self.label = label
        self.candidates = list(candidates)
        super().__init__(
            f"label {label} received {len(self.candidates)} roots "
            f"(expected exactly one): {self.candidates}"
        )


class MissingLabel(RetardedSLError, KeyError):
    pass


class ConfigError(RetardedSLError, ValueError):
    pass
