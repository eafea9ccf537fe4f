"""Typed failures shared across the package."""


class OrbkitError(Exception):
    pass


class GroupoidError(OrbkitError):
    """An axiom failed during validation; args carry the first witness."""


class NonAssociative(GroupoidError):
    def __init__(self, triple):
        super().__init__("composition not associative at %r" % (triple,))
        self.triple = triple


class MissingIdentity(GroupoidError):
    def __init__(self, obj):
        super().__init__("no two-sided identity at object %r" % (obj,))
        self.obj = obj


class BadInverse(GroupoidError):
    def __init__(self, arrow):
        super().__init__("no two-sided inverse for arrow %r" % (arrow,))
        self.arrow = arrow


class EndpointMismatch(GroupoidError):
    def __init__(self, pair, reason=""):
        msg = "endpoint mismatch at %r" % (pair,)
        if reason:
            msg += ": " + reason
        super().__init__(msg)
        self.pair = pair


class NotACover(OrbkitError):
    def __init__(self, missing):
        super().__init__("map misses base points %r" % (missing,))
        self.missing = missing


class NotFree(OrbkitError):
    def __init__(self, fiber):
        super().__init__("action not free on fiber %r" % (fiber,))
        self.fiber = fiber


class ShearNotBijective(OrbkitError):
    pass


class NotPrincipal(OrbkitError):
    pass


class PentagonViolation(OrbkitError):
    def __init__(self, witness):
        super().__init__("coherence fails at %r" % (witness,))
        self.witness = witness


class NotASubgroup(OrbkitError):
    def __init__(self, subset):
        super().__init__("subset %r is not a subgroup" % (sorted(subset),))
        self.subset = subset


class PreconditionFailed(OrbkitError):
    pass


class ParseError(OrbkitError):
    """Malformed workspace or entity file."""

    def __init__(self, line, message=""):
        self.line = line
        super().__init__("parse error at %r%s" % (line, ": " + message if message else ""))


class UnknownEntity(OrbkitError):
    """A named entity is not present in the workspace."""

    def __init__(self, name):
        self.name = name
        super().__init__("unknown entity %r" % (name,))


class BudgetExceeded(OrbkitError):
    """Enumeration stopped early; partial carries how far it got."""

    def __init__(self, op, partial=None):
        msg = "budget exceeded in %s" % op
        if partial is not None:
            msg += " (partial count %d)" % partial
        super().__init__(msg)
        self.op = op
        self.partial = partial


class SizeLimit(BudgetExceeded):
    pass


class Indeterminate:
    """Search gave up within its node budget; neither yes nor no."""

    def __init__(self, op, nodes):
        self.op = op
        self.nodes = nodes

    def __repr__(self):
        return "Indeterminate(%s, nodes=%d)" % (self.op, self.nodes)
