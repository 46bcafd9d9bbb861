"""Exception hierarchy shared by all pipeline stages."""


class ComicgenError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(ComicgenError):
    """Bad user input (manifest, CLI arguments, sidecar files).

    The CLI maps these to exit code 2.
    """


# subtitle
class MalformedTimestamp(ValidationError):
    pass


class EmptyFile(ValidationError):
    pass


# framestream
class MissingFrame(ValidationError):
    pass


class DimensionMismatch(ComicgenError):
    pass


class LengthMismatch(ComicgenError):
    pass


# keyframes
class EmptyShot(ComicgenError):
    pass


# semantics
class UnknownKeyframeIndex(ValidationError):
    pass


class BoxOutOfBounds(ValidationError):
    pass


# allocate
class Infeasible(ComicgenError):
    pass


class TooLarge(ComicgenError):
    pass


# layout
class TooManyPanels(ComicgenError):
    pass


# compress
class EmptyAfterStripping(ComicgenError):
    pass


class NoSupportingSentence(ComicgenError):
    pass


class NoPath(ComicgenError):
    pass


# balloon
class SingleClass(ComicgenError):
    pass


class TooFewRows(ComicgenError):
    pass


class DoesNotFit(ComicgenError):
    pass


class CannotPlace(ComicgenError):
    pass


# compose
class MissingImage(ComicgenError):
    pass


class ManifestError(ValidationError):
    pass


class StageError(ComicgenError):
    """Wraps an error raised inside a pipeline stage with the stage name."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause
