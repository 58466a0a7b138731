import logging
import os

from feilab.config import configure_logging
from feilab.experiments import exhaustive_stats, fourth_moment_table

LOG_FILE = os.path.join(os.path.dirname(__file__), "moments.log")

logger = logging.getLogger("feilab.moments")


def check_moments(max_arity: int = 4, log_file: str = LOG_FILE) -> bool:
    """Compare enumerated influence moments with their closed forms."""
    configure_logging("INFO", log_file)
    exact = True
    for n in range(1, max_arity + 1):
        record = exhaustive_stats(n, epsilon=1.0)
        for key in ("mean_influence", "var_influence", "mean_influence_sq"):
            gap = abs(record.stats[key] - record.bounds[key])
            exact &= gap <= 1e-12
            logger.info("n=%d %s off by %.3g", n, key, gap)
        if n <= 3:
            table = fourth_moment_table(n)
            exact &= table.max_abs_diff <= 1e-12
            logger.info(
                "n=%d fourth moments off by %.3g", n, table.max_abs_diff
            )
    return exact


if __name__ == "__main__":
    check_moments()
