"""Exception hierarchy for xdiscord."""


class XDiscordError(Exception):
    """Base class for every error raised by this package."""


class InvalidState(XDiscordError, ValueError):
    """The six X-state parameters do not describe a density matrix.

    Attributes
    ----------
    constraint : str
        Human readable name of the violated constraint.
    excess : float
        By how much the constraint is violated.
    """

    def __init__(self, constraint, excess):
        self.constraint = constraint
        self.excess = float(excess)
        super().__init__(f"{type(self).__name__}: {constraint} (violated by {excess:.3e})")


class NegativeWeight(InvalidState):
    pass


class TraceNotOne(InvalidState):
    pass


class PositivityViolated(InvalidState):
    pass


class InvalidPovm(XDiscordError, ValueError):
    pass


class DomainError(XDiscordError, ValueError):
    """Argument outside the domain of a function."""


class DegenerateOutcome(XDiscordError):
    """A measurement element has zero outcome probability."""


class DegenerateEllipse(XDiscordError):
    """The operation is undefined for the (collapsed) steering ellipse."""


class SingularPoint(XDiscordError):
    """Derivative requested where the steered state is pure (r -> 1)."""


class SingularBracket(XDiscordError):
    pass


class LemmaViolation(XDiscordError):
    """The horizontal entropy curve showed more than one inflection point.

    ``inflections`` holds the refined sign-change abscissae.
    """

    def __init__(self, inflections):
        self.inflections = list(inflections)
        super().__init__(
            f"{len(self.inflections)} inflection points found at {self.inflections}"
        )


class NoSolution(XDiscordError, ValueError):
    pass


class AmbiguousBranch(XDiscordError):
    """More than one physical state realises the requested ellipse.

    ``solutions`` lists every candidate; pass ``branch=`` to choose.
    """

    def __init__(self, solutions):
        self.solutions = list(solutions)
        super().__init__(f"{len(self.solutions)} states realise this ellipse")


class InversionFailed(XDiscordError):
    pass
