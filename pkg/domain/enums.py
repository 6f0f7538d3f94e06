"""Domain enums for the braid dilatation toolkit."""

from enum import Enum


class RepresentationKind(str, Enum):
    """Laurent-matrix representations of a braid."""

    BURAU = "burau"
    LKB = "lkb"
    FOX = "fox"


class BraidClass(str, Enum):
    """Nielsen-Thurston type reported by the B3 oracle."""

    PERIODIC = "periodic"
    REDUCIBLE = "reducible"
    PSEUDO_ANOSOV = "pseudo-Anosov"


class GrowthSource(str, Enum):
    """Sequence family for the growth command."""

    ZETA1 = "zeta1"
    BURAU = "burau"
    LKB = "lkb"


class CheckSuiteName(str, Enum):
    """Named invariant suites."""

    RELATIONS = "relations"
    LEMMAS = "lemmas"
    THEOREM1 = "theorem1"
    ALL = "all"


class OutputFormat(str, Enum):
    """Output encodings of the CLI."""

    JSON = "json"
    CSV = "csv"
