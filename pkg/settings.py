"""
Run-wide defaults and logging setup.

Module-level constants play the role of tuning flags; the CLI overrides them
per run through RunConfig rather than by mutating this module.
"""

import logging
import os

# --- Resource guards ---
WORK_LIMIT = 2 ** 24        # elementary terms per Walsh certificate
TABLE_LIMIT = 2 ** 20       # largest order that gets exp/log tables
MAX_ORDER = 2 ** 24         # largest supported field
ROW_BLOCK = 2 ** 20         # cells per vectorised DDT block

# --- Reproducibility / parallelism ---
DEFAULT_SEED = 2024
DEFAULT_WORKERS = int(os.environ.get("CCDIFF_WORKERS", "1"))

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(verbosity: int = 0, quiet: bool = False) -> None:
    """Install a single stream handler on the root logger.

    Args:
        verbosity: 0 -> WARNING, 1 -> INFO, 2+ -> DEBUG
        quiet: force ERROR regardless of verbosity
    """
    if quiet:
        level = logging.ERROR
    elif verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(level)
