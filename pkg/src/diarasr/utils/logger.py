import sys
from pathlib import Path
from typing import Optional

from loguru import logger

CONSOLE_FORMAT = "<level>{level}</level>: {message}"
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} - {name} - {level} - {message}"


def setup_logger(level: str = "INFO", log_file: Optional[str] = None):
    """Configure loguru sinks: stderr always, a rotating file when requested.

    stdout is reserved for report documents, so the console sink is stderr.
    """
    logger.remove()
    logger.add(sys.stderr, level=level.upper(), format=CONSOLE_FORMAT)

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            log_file,
            level=level.upper(),
            format=FILE_FORMAT,
            rotation="10 MB",
            retention=5,
        )

    return logger
