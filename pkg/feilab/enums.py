import logging
from enum import Enum, IntEnum


class LoggingLevel(IntEnum):
    CRITICAL = logging.CRITICAL
    ERROR = logging.ERROR
    WARNING = logging.WARNING
    INFO = logging.INFO
    DEBUG = logging.DEBUG


class FamilyKind(str, Enum):
    RANDOM = "random"
    SYMMETRIC = "symmetric"
    CYCLIC_INVARIANT = "cyclic"
    NAMED = "named"
    ALL = "all"


class NamedKind(str, Enum):
    PARITY = "parity"
    MAJORITY = "majority"
    TRIBES = "tribes"
    AND = "and"
    OR = "or"
    DICTATOR = "dictator"
    CONSTANT = "constant"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class Subcommand(str, Enum):
    ANALYZE = "analyze"
    MONTECARLO = "montecarlo"
    EXHAUSTIVE = "exhaustive"
    MOMENTS = "moments"
    SCAN = "scan"
    BOUND = "bound"
