"""Exception hierarchy shared across the codec."""


class CodecError(Exception):
    """Base class for all codec errors."""


# --- raster ---

class BadMagic(CodecError):
    pass


class BadHeader(CodecError):
    pass


class TruncatedPixelData(CodecError):
    pass


class UnsupportedMaxval(CodecError):
    pass


# --- edge detection ---

class ImageTooSmall(CodecError):
    pass


# --- bi-level / grid / bundle streams ---

class UnsupportedVersion(CodecError):
    pass


class TruncatedStream(CodecError):
    pass


class BadMode(CodecError):
    pass


class TruncatedPayload(CodecError):
    pass


class GridLargerThanImage(CodecError):
    pass


# --- salient regions ---

class OutOfBounds(CodecError):
    pass


class ZeroArea(CodecError):
    pass


# --- bundle ---

class DuplicateTag(CodecError):
    pass


class MissingPrompt(CodecError):
    pass


class CrcMismatch(CodecError):
    def __init__(self, tag, message=None):
        self.tag = tag
        super().__init__(message or f"CRC mismatch in section tag {tag}")


class Truncated(CodecError):
    pass


# --- encoder ---

class MissingRegions(CodecError):
    pass


class PromptTooLong(CodecError):
    pass


class EmptyPrompt(CodecError):
    pass


class ProviderUnavailable(CodecError):
    pass


# --- metrics ---

class DimensionMismatch(CodecError):
    pass


# --- bench ---

class EmptyCorpus(CodecError):
    pass


class NoRows(CodecError):
    pass
