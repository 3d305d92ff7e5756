"""Exception hierarchy shared by all modules."""


class TreePartError(Exception):
    """Base class for all errors raised by this package."""


class InputError(TreePartError, ValueError):
    """Invalid arguments (unknown node ids, wrong vector lengths, ...)."""


class PreconditionError(TreePartError, ValueError):
    """An operation was called outside its domain (e.g. DP on a non-path)."""


class SizeLimitError(TreePartError):
    """An exhaustive routine was asked to enumerate beyond its cap."""


class InfeasibleEncodingError(TreePartError, ValueError):
    """A lifted vector is not the lifted multicut of any edge labeling."""


class ParseError(InputError):
    """Base class for instance-file errors."""


class MalformedInstanceError(ParseError):
    """The document is not valid JSON or does not follow the schema."""


class NonTreeError(ParseError):
    """The edge list does not form a tree (cycle, disconnected, wrong count)."""


class NodeRangeError(ParseError):
    """A node id lies outside 0..nodes-1."""


class DuplicatePairError(ParseError):
    """The same unordered pair occurs twice in the cost list."""
