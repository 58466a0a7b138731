import logging.config
import os

from feilab.config import ConfigLogging
from feilab.experiments import family_scan

LOG_FILE = os.path.join(os.path.dirname(__file__), "symmetric.log")


class SymmetricScan:
    """Scan the symmetric families of growing arity for their worst ratio."""

    def __init__(
        self,
        name_logger: str = "feilab.symmetric",
        log_file: str = LOG_FILE,
        c: float = 2.0,
    ):
        self.name_logger: str = name_logger
        self.log_file: str = log_file
        self.c: float = c

    def logger(self) -> logging.Logger:
        config = ConfigLogging()
        config.add_default_formatter()
        config.add_console_handler(level="INFO")
        config.add_file_handler(self.log_file)
        config.add_default_logger(self.name_logger, level="INFO")
        logging.config.dictConfig(dict(config))
        return logging.getLogger(self.name_logger)

    def __call__(self, max_arity: int = 8) -> dict[int, float | None]:
        logger = self.logger()
        worst = {}
        for n in range(1, max_arity + 1):
            stats = family_scan(f"symmetric:n={n}", self.c).stats
            worst[n] = stats["max_ratio"]
            logger.info(
                "n=%d: max ratio %s at function #%s, %d above C=%g",
                n,
                stats["max_ratio"],
                stats["argmax_id"],
                stats["violation_count"],
                self.c,
            )
        return worst


if __name__ == "__main__":
    SymmetricScan()()
