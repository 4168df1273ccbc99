"""Exception hierarchy shared by all modules."""


class CongruenceForgeError(Exception):
    """Base class for errors raised by this package."""


class NotDivisible(CongruenceForgeError, ArithmeticError):
    """Exact division of Laurent polynomials left a nonzero remainder."""


class SpecError(CongruenceForgeError):
    """A product spec is malformed or describes an illegal product."""


class ParseError(SpecError):
    """Syntax error in the product-spec DSL.

    ``position`` is the byte offset of the offending token and ``expected``
    the set of token kinds that would have been accepted there.
    """

    def __init__(self, message, position, expected=()):
        self.position = position
        self.expected = frozenset(expected)
        detail = f"{message} at offset {position}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class SemanticError(SpecError):
    """Syntactically valid factor that is mathematically forbidden."""


class NonUnitLeadingTerm(CongruenceForgeError):
    """Series inversion needs a unit monomial (+-zeta^k) as lowest coefficient."""


class SpecHasResidualPole(SpecError):
    """The product has poles in z away from the integers (e.g. at half-torsion)."""


class OutOfRange(CongruenceForgeError):
    """Requested exponent lies at or beyond the truncation bound."""


class InsufficientRange(CongruenceForgeError):
    """Too few lattice points of a progression fall below the evidence bound."""


class ConsistencyError(CongruenceForgeError):
    """Two routes that must agree produced different answers (an engine bug)."""
