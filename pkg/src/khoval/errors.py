"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`KhovalError`
so callers (the CLI in particular) can map families of failures to exit codes.
"""

from __future__ import annotations


class KhovalError(Exception):
    """Base class."""


class InputError(KhovalError):
    """The input text or file could not be turned into a diagram."""


class MalformedInput(InputError):
    pass


class ArcArity(InputError):
    """An arc label does not occur exactly twice."""


class NonPlanar(InputError):
    """Face tracing contradicts the Euler formula for a sphere."""


class EmptyDiagram(InputError):
    pass


class LimitError(KhovalError):
    """A configured size limit was exceeded."""


class TooManyCrossings(LimitError):
    pass


class DisconnectedDiagram(KhovalError):
    pass


class UnknownCrossing(KhovalError):
    pass


class PreconditionViolated(KhovalError):
    def __init__(self, predicate: str, detail: str = ""):
        self.predicate = predicate
        super().__init__(f"precondition '{predicate}' violated" + (f": {detail}" if detail else ""))


class ClassificationFailure(KhovalError):
    """Case trichotomy found no case. Signals a bug, never expected."""


class InvalidWitness(KhovalError):
    pass


class OrderingViolation(KhovalError):
    pass


class NotAComplex(KhovalError):
    pass


class NugatoryCrossing(KhovalError):
    pass


class EmptyHomology(KhovalError):
    pass


class RepresentativeMismatch(KhovalError):
    pass
