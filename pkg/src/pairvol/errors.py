"""Exception hierarchy.

Everything a caller can trigger with bad input derives from ``DomainError``;
the CLI maps those to exit status 2.  ``CertificateFailure`` and
``ClassificationMismatch`` signal internal inconsistencies and should never
fire on validated input.
"""


class DomainError(Exception):
    """Input is outside the domain of a computation."""


class SingularSystem(DomainError):
    pass


class GraphSyntaxError(DomainError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class UnknownVertex(DomainError):
    pass


class WeightOutOfRange(DomainError):
    pass


class InvalidGraph(DomainError):
    pass


class NotNegativeDefinite(InvalidGraph):
    def __init__(self, witness):
        super().__init__(f"not negative definite (witness minor index {witness})")
        self.witness = witness


class BadLocus(DomainError):
    pass


class ExceptionalCase(DomainError):
    """One curve carrying two arrows: no minimal orbifold resolution exists."""


class ZeroCoefficient(DomainError):
    pass


class NotLogTerminal(DomainError):
    pass


class BadChain(DomainError):
    pass


class PreconditionViolated(DomainError):
    pass


class ExcludedGraph(DomainError):
    pass


class UnknownFixture(DomainError):
    pass


class OutsideClassification(DomainError):
    """Volume zero, but X is log canonical without being log terminal and the
    pair carries no orbifold weight, so none of the listed cases applies."""


class BadParameter(DomainError):
    pass


class EmptySet(DomainError):
    pass


class CertificateFailure(AssertionError):
    pass


class ClassificationMismatch(AssertionError):
    pass
