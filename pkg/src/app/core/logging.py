import logging
from typing import Optional

from src.app.core.config import get_settings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: Optional[str] = None) -> None:
    """
    Install a single stream handler on the root logger.

    Args:
        level: Level name; defaults to the configured log level.
    """
    level_name = (level or get_settings().log_level).upper()
    logging.basicConfig(level=level_name, format=LOG_FORMAT, force=True)
    logging.getLogger(__name__).debug("logging configured at %s", level_name)
