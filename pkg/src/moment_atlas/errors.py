"""Exception types shared across the package."""


class MomentAtlasError(Exception):
    """Base class for all library errors."""


class FormatError(MomentAtlasError):
    """A JSON document does not match the expected schema."""


class ComplexDisconnected(MomentAtlasError):
    """The input geometry splits into several connected components."""

    def __init__(self, component_sizes):
        self.component_sizes = tuple(component_sizes)
        super().__init__(
            "geometry is not connected: component sizes %s" % (self.component_sizes,)
        )


class DegenerateGeometry(MomentAtlasError):
    """Zero-length segments, empty faces, or inconsistent planar structure."""


class PathOffCurve(MomentAtlasError):
    """A path sample lies farther than the tolerance from the complex."""

    def __init__(self, index, distance=None):
        self.index = index
        self.distance = distance
        msg = "sample %d is off the complex" % index
        if distance is not None:
            msg += " (distance %.3g)" % distance
        super().__init__(msg)


class TraceError(MomentAtlasError):
    """A path lies on the complex but is not a concatenation of full edge passes."""


class NotClosed(MomentAtlasError):
    """An operation requiring a closed path or word received an open one."""


class PointOnCurve(MomentAtlasError):
    """A winding-number query point lies on the path itself."""


class ConditionStarViolated(MomentAtlasError):
    """A cube family fails one of its certification clauses.

    ``clause`` is one of ``"disjoint"``, ``"center"``, ``"connected"``,
    ``"other_edge"``, ``"injective"``, ``"measure"``; ``i``/``j`` are the
    offending edge indices (``j`` only for pairwise clauses).
    """

    def __init__(self, clause, i, j=None, detail=""):
        self.clause = clause
        self.i = i
        self.j = j
        where = "edge %s" % i if j is None else "edges %s, %s" % (i, j)
        msg = "cube family invalid (%s) at %s" % (clause, where)
        if detail:
            msg += ": " + detail
        super().__init__(msg)


class DegreeTooLarge(MomentAtlasError):
    """The requested degree exceeds the multinomial expansion guard."""


class Blowup(MomentAtlasError):
    """The return-map integration escaped the divergence guard."""

    def __init__(self, v0):
        self.v0 = v0
        super().__init__("solution escaped for initial value %r" % (v0,))
