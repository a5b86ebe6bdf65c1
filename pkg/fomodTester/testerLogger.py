import logging
import sys

LEVELS = {
    'DEBUG': logging.DEBUG,
    'INFO': logging.INFO,
    'WARNING': logging.WARNING,
    'ERROR': logging.ERROR,
    'CRITICAL': logging.CRITICAL,
}


def setup_logger(level='INFO', logfile=None):
    """
    Attach screen (and optionally file) handlers to the root logger.
    Unknown level names fall back to WARNING.
    """

    root = logging.getLogger()

    screen_log_format = '[%(levelname).4s] [%(funcName)25s] %(message)s'
    file_log_format = '[%(asctime)-15s] [%(levelname)08s]  [%(name)s] [%(funcName)s] %(message)s'

    level_value = LEVELS.get(str(level).upper(), logging.WARNING)

    root.handlers = []

    screen_handler = logging.StreamHandler(sys.stdout)
    screen_handler.setLevel(level_value)
    screen_handler.setFormatter(logging.Formatter(screen_log_format))
    root.addHandler(screen_handler)

    if logfile is not None:
        root.info('Setting up logfile: {}'.format(logfile))
        fh = logging.FileHandler(logfile)
        fh.setLevel(level_value)
        fh.setFormatter(logging.Formatter(file_log_format))
        root.addHandler(fh)

    return root


def log_banner(logger, title, char='&%'):
    """
    Log a title between two banner lines.
    """
    bar = (char * (len(title) // len(char) + 2))[:len(title) + 4]
    logger.info("")
    logger.info(bar)
    logger.info(title)
    logger.info(bar)
    logger.info("")
