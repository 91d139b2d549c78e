"""Exception hierarchy shared by every module of the package."""


class CosheafError(Exception):
    """Base class for all errors raised by poset_cosheaf."""


class CycleError(CosheafError, ValueError):
    """A generating relation closes up into a nontrivial directed cycle."""


class SizeError(CosheafError):
    """A configured enumeration bound would be exceeded."""


class ParentMismatch(CosheafError, ValueError):
    """Down-sets or covers that must share a poset do not."""


class TargetMismatch(CosheafError, ValueError):
    """Two covers were expected to cover the same down-set."""


class NotComparable(CosheafError, ValueError):
    """An induced map was requested for a pair p, q with p not <= q."""


class NotFunctorial(CosheafError, ValueError):
    """Edge maps of a diagram are not path independent."""


class NotACocone(CosheafError, ValueError):
    """A family of maps does not commute with the diagram's edge maps."""


class MissingOpen(CosheafError, KeyError):
    """A cover member or target is not an object of the precosheaf."""


class NotBasic(CosheafError, ValueError):
    """A basic cover was required."""


class ParseError(CosheafError, ValueError):
    """An instance file is not well-formed JSON or misses required fields."""


class ValidationError(CosheafError, ValueError):
    """An instance file parses but violates a structural invariant."""
