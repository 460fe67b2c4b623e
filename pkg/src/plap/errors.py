"""Exception hierarchy shared by the library and the CLI."""


class PlapError(Exception):
    """Base class for every error raised on bad user input."""


class ParseError(PlapError, ValueError):
    """Malformed complex or map file."""


class ValidationError(PlapError, ValueError):
    """Structurally invalid complex (not face-closed, bad weight, unknown vertex)."""


class MapError(PlapError, ValueError):
    """A vertex map that does not send simplices to simplices."""


class WeightPreservationError(PlapError, ValueError):
    """Raised when an operation requires a weight preserving map and gets another.

    Persistent Betti numbers do not depend on weights, so the usual fix is to
    reweight the codomain by pushing the domain weights forward (see
    ``plap.complex.image_complex``).
    """


class InvariantError(RuntimeError):
    """An internal cross-check disagreed; this is a bug, not a user error."""
