import dataclasses
import logging.config
import os
from collections.abc import Iterator, MutableMapping
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any

from feilab.enums import LoggingLevel
from feilab.errors import DomainError

ARITY_CAP_ENV = "FEI_ARITY_CAP"
LOGGER_NAME = "feilab"


@dataclass(frozen=True, slots=True)
class Settings:
    """
    Run-time limits shared by every module.

    Attributes:
        arity_cap (int): Largest arity a truth table may have.
        exhaustive_cap (int): Largest arity enumerated over all functions.
        enumeration_budget (int): Largest family materialised by a scan.
        chunk_size (int): Functions transformed per batch. Fixed
            independently of ``workers`` so reductions see the same rows.
        chunk_points (int): Truth-table points per batch. Caps the rows
            of a batch at ``chunk_points >> n`` (at least one).
        workers (int): Threads used by experiments.
    """

    arity_cap: int = 24
    exhaustive_cap: int = 4
    enumeration_budget: int = 1 << 21
    chunk_size: int = 512
    chunk_points: int = 1 << 20
    workers: int = 1

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not isinstance(value, int) or value < 1:
                raise DomainError(
                    f"setting {field.name} must be a positive integer, "
                    f"got {value!r}"
                )

    @classmethod
    def from_env(cls) -> "Settings":
        """
        Build settings from the environment.

        Returns:
            Settings: Defaults with ``FEI_ARITY_CAP`` applied when set.

        Raises:
            DomainError: If ``FEI_ARITY_CAP`` is not a positive integer.
        """
        raw = os.environ.get(ARITY_CAP_ENV)
        if raw is None or not raw.strip():
            return cls()
        try:
            cap = int(raw)
        except ValueError:
            raise DomainError(
                f"{ARITY_CAP_ENV} must be an integer, got {raw!r}"
            ) from None
        return cls(arity_cap=cap)


_override: Settings | None = None


def get_settings() -> Settings:
    """Return the active settings: an installed override or the env."""
    if _override is not None:
        return _override
    return Settings.from_env()


@contextmanager
def override_settings(**changes: Any) -> Iterator[Settings]:
    """
    Temporarily replace fields of the active settings.

    Args:
        **changes: Field values to replace.

    Yields:
        Settings: The settings in force inside the block.
    """
    global _override
    previous = _override
    _override = dataclasses.replace(get_settings(), **changes)
    try:
        yield _override
    finally:
        _override = previous


class ConfigLogging(MutableMapping):
    """
    A ``dictConfig`` document for the feilab loggers, built step by step.

    Only the keys of ``default_config`` exist; setting any other key is
    ignored and deleting is a no-op, so the document always stays valid
    for ``logging.config.dictConfig``.
    """

    default_config = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {},
        "handlers": {},
        "loggers": {},
    }

    def __init__(self):
        for key, value in self.default_config.items():
            self.__dict__[key] = (
                dict(value) if isinstance(value, dict) else value
            )

    def __getitem__(self, key: Any):
        return self.__dict__.get(key, None)

    def __delitem__(self, key: Any):
        """Doesn't do anything."""

    def __setitem__(self, key: Any, value: Any):
        if key in self.__dict__:
            self.__dict__[key] = value

    def __iter__(self):
        return iter(self.__dict__)

    def __len__(self):
        return len(self.__dict__)

    def __repr__(self):
        return self.__dict__.__repr__()

    def add_default_formatter(self):
        """Add the single formatter every feilab handler uses."""
        self["formatters"]["formatter"] = {
            "format": (
                "[%(name)s %(levelname)s %(asctime)s %(filename)s: %(lineno)d"
                " - %(funcName)s()] %(message)s"
            ),
            "datefmt": "%Y-%m-%d %H:%M:%S",
        }

    def add_console_handler(
        self,
        level: str = "WARNING",
        formatter: str = "formatter",
        stream: str = "ext://sys.stderr",
    ):
        """
        Add a console handler.

        Standard output carries result documents, so the console handler
        writes to standard error unless told otherwise.

        Args:
            level (str): Logging level, default is "WARNING".
            formatter (str): Formatter name, default is "formatter".
            stream (str): Stream location, default is "ext://sys.stderr".
        """
        self["handlers"]["console"] = {
            "level": level,
            "class": "logging.StreamHandler",
            "formatter": formatter,
            "stream": stream,
        }

    def add_file_handler(
        self,
        filename: str,
        level: str = "DEBUG",
        formatter: str = "formatter",
    ):
        """
        Add a handler appending to ``filename``.

        Args:
            filename (str): Log file path.
            level (str): Logging level, default is "DEBUG".
            formatter (str): Formatter name, default is "formatter".
        """
        self["handlers"]["file"] = {
            "level": level,
            "class": "logging.FileHandler",
            "formatter": formatter,
            "filename": filename,
            "encoding": "utf-8",
        }

    def add_default_logger(
        self,
        name: str = LOGGER_NAME,
        level: str = "WARNING",
        propagate: bool = False,
    ):
        """
        Add a logger wired to every handler added so far.

        Args:
            name (str): The name of the logger.
            level (str): Logging level. Defaults to "WARNING".
            propagate (bool): Whether records reach the root logger.
        """
        self["loggers"][name] = {
            "handlers": tuple(self["handlers"]),
            "level": level,
            "propagate": propagate,
        }


def configure_logging(
    level: str = LoggingLevel.WARNING.name,
    log_file: str | None = None,
) -> logging.Logger:
    """
    Configure the ``feilab`` logger tree.

    Args:
        level (str): A ``LoggingLevel`` member name.
        log_file (str | None): Optional file receiving the same records.

    Returns:
        logging.Logger: The configured ``feilab`` logger.

    Raises:
        DomainError: If ``level`` is not a ``LoggingLevel`` name.
    """
    if level not in LoggingLevel.__members__:
        raise DomainError(f"unknown logging level {level!r}")
    config = ConfigLogging()
    config.add_default_formatter()
    config.add_console_handler(level=level)
    if log_file is not None:
        config.add_file_handler(log_file, level=level)
    config.add_default_logger(level=level)
    logging.config.dictConfig(dict(config))
    return logging.getLogger(LOGGER_NAME)
