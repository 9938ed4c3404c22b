import logging
import sys

from loguru import logger


class InterceptHandler(logging.Handler):
    def emit(self, record):
        # Get corresponding Loguru level if it exists
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        # Find caller from where originated the logged message
        frame, depth = logging.currentframe(), 6
        while frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back
            depth += 1
        logger.opt(depth=depth, exception=record.exc_info).log(
            level, record.getMessage()
        )


def setting_log(level="WARNING", save_file=False, log_name="bkm_weights", **kwargs):
    """
    Configures loguru sinks for the library and the CLI.

    Args:
        level (str): Level of the stderr sink. Stdout is reserved for results.
        save_file (bool): Also write a rotating file under ./Log.
        log_name (str): Base name of the log file.
    """
    logging.root.handlers = [InterceptHandler()]
    for name in logging.root.manager.loggerDict.keys():
        logging.getLogger(name).handlers = []
        logging.getLogger(name).propagate = True

    config_handlers = [
        {"sink": sys.stderr, "level": level.upper()},
    ]
    if save_file:
        config_handlers += [
            {
                "sink": f"./Log/{log_name}.log",
                "enqueue": kwargs.get("multi_process", False),
                "rotation": "50 MB",
                "level": "DEBUG",
            }
        ]

    logger.configure(handlers=config_handlers)
