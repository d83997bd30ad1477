"""Exception types shared across the engine."""


class RegionGemError(Exception):
    """Base class for every error raised by regiongem."""


class UnsupportedFormat(RegionGemError):
    """Byte stream is not a raster container we can decode."""


class CorruptImage(RegionGemError):
    """Container recognized but decoding failed."""


class DegenerateImage(RegionGemError):
    """Image too small to host the five-region geometry (needs >= 2x2)."""


class DomainError(RegionGemError):
    """Channel value outside its documented range."""


class DimensionMismatch(RegionGemError):
    """Arrays or vectors that must agree in shape do not."""


class EmptyIndex(RegionGemError):
    """Ranking requested against an index with no entries."""


class ConfigMismatch(RegionGemError):
    """Query and index were built with different bin configurations."""


class ChecksumMismatch(RegionGemError):
    """Index file failed its integrity check (truncated or altered)."""


class VersionMismatch(RegionGemError):
    """Index file was written by a newer format version than this reader."""


class EmptyManifest(RegionGemError):
    """Manifest holds no records."""


class AllImagesFailed(RegionGemError):
    """Every image referenced by a manifest failed to decode."""


class EmptyDataset(RegionGemError):
    """Dataset root contains no usable class folders or images."""


class UnreadableDirectory(RegionGemError):
    """Dataset root does not exist or is not a directory."""


class MalformedCsv(RegionGemError):
    """CSV metadata is missing required columns or is not parseable."""


class EmptyQuerySet(RegionGemError):
    """Evaluation requested with no query images."""
