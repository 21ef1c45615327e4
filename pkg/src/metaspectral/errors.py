"""Exception hierarchy shared by every module."""


class MetaSpectralError(Exception):
    """Base class for all errors raised by this package."""


# graph construction and combinatorics
class GraphError(MetaSpectralError):
    pass


class NegativeWeight(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class IsolatedVertex(GraphError):
    pass


class VertexOutOfRange(GraphError):
    pass


class EmptySet(GraphError):
    pass


class FullSet(GraphError):
    pass


class TooLarge(MetaSpectralError):
    pass


class InvalidK(MetaSpectralError):
    pass


# eigensolver
class NoConvergence(MetaSpectralError):
    def __init__(self, message, iterations=None, worst_residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.worst_residual = worst_residual


class BadL(MetaSpectralError):
    pass


# k-means
class KTooLarge(MetaSpectralError):
    pass


class DegeneratePoints(MetaSpectralError):
    pass


class LabelOutOfRange(MetaSpectralError):
    pass


# clusterings, meta-graphs and theory checks
class EmptyCluster(MetaSpectralError):
    pass


class KMismatch(MetaSpectralError):
    pass


class ZeroEmbeddingNorm(MetaSpectralError):
    pass


class ZeroDenominator(MetaSpectralError):
    pass


class DisconnectedGraph(MetaSpectralError):
    pass


class IdentityViolation(MetaSpectralError):
    """An algebraic identity that must hold exactly failed beyond tolerance."""


# generators
class BadParams(MetaSpectralError):
    pass


class DegenerateProbabilities(MetaSpectralError):
    pass


class TooManyRetries(MetaSpectralError):
    pass


# similarity graphs
class DuplicatePointsExceedK(MetaSpectralError):
    pass


# file formats
class ParseError(MetaSpectralError):
    pass
