"""Colored console (and optional file) logging for experiment runs."""
import logging

import coloredlogs

LOG_FORMAT = "%(asctime)s | %(filename)12s | %(levelname)8s | %(message)s"


def get_logger(name="online_risk_control", log_file=None, level=logging.INFO):
    """Initialize a logger that outputs to console and, optionally, to a file.

    Parameters
    ----------
    name : str
        Logger name. The package root name makes every module logger inherit the handlers.
    log_file : str, optional
        Path of a DEBUG-level log file.
    level : int
        Console level.

    Returns
    -------
    logger : logging.Logger

    """
    logger = logging.getLogger(name)
    logger.setLevel(logging.DEBUG)
    formatter = coloredlogs.ColoredFormatter(LOG_FORMAT)

    # Calling twice (one call per CLI invocation in tests) must not double the output
    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    ch = logging.StreamHandler()
    ch.setLevel(level)
    ch.setFormatter(formatter)
    logger.addHandler(ch)

    if log_file:
        fh = logging.FileHandler(log_file)
        fh.setLevel(logging.DEBUG)
        fh.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(fh)

    logger.propagate = False

    return logger
