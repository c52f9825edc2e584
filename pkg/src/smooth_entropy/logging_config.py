"""
Centralized logging configuration for the smooth_entropy package.
Library modules only create loggers; handlers are installed here, once,
by whichever entry point owns the process (the CLI or a test session).
"""

import logging
import sys

from rich.console import Console
from rich.logging import RichHandler

# Third-party loggers that are chatty at DEBUG and irrelevant to numerics.
_NOISY_LOGGERS = ("matplotlib", "numba", "urllib3")


def setup_logging(
    level: str = "INFO",
    use_rich: bool = True,
) -> None:
    """
    Set up consistent logging across the package.

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR)
        use_rich: Whether to use Rich's colored output (recommended for interactive runs)
    """
    numeric_level = getattr(logging, level.upper(), logging.INFO)

    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)

    # Remove existing handlers to avoid duplicates on repeated CLI invocations
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    if use_rich:
        # Results go to stdout, so logs must stay on stderr
        console = Console(file=sys.stderr)

        handler = RichHandler(
            console=console,
            level=numeric_level,
            show_time=True,
            show_level=True,
            show_path=True,
            rich_tracebacks=True,
            markup=False,
            log_time_format="[%H:%M:%S]",
        )
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    else:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(
            logging.Formatter(
                "[%(asctime)s] %(levelname)-5s %(name)s: %(message)s",
                datefmt="%H:%M:%S",
            )
        )

    handler.setLevel(numeric_level)
    root_logger.addHandler(handler)

    for name in _NOISY_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)

    logging.getLogger(__name__).debug(f"Logging configured: level={level}, rich={use_rich}")
