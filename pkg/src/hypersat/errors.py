"""Exception hierarchy shared by all hypersat modules."""


class ParameterError(ValueError):
    """An argument violates an operation's precondition."""


class FormatError(ValueError):
    """A serialized hypergraph or trace deviates from the canonical format."""


class TooLarge(ValueError):
    """A host hypergraph exceeds the exhaustive-search budget."""


class ConstructionFailure(Exception):
    """A randomized construction could not be completed for this sample.

    These are expected at small n or small p and are reported per trial,
    never treated as bugs.
    """


class NotFound(ConstructionFailure):
    """No block satisfies the requested extension property."""


class NoCoreFound(ConstructionFailure):
    """Some vertex set exhausted every core without a qualifying index."""


class TraceFailed(ConstructionFailure):
    """The structured activation order could not activate an edge."""


class Infeasible(ConstructionFailure):
    """Strong-construction set sizes do not fit into the vertex set."""


class IntegrityViolation(RuntimeError):
    """An internal invariant failed; indicates a bug rather than bad luck."""
