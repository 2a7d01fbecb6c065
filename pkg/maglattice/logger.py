import logging
import inspect
from os.path import basename, splitext

from . import config


class Logger:
    """ Main class used throughout the project

    ==LEVEL==   Numeric value
    CRITICAL    50
    ERROR       40
    WARNING     30
    INFO        20
    DEBUG       10
    NOTSET      0

    usage:
    self.log.info("message")

    Console output goes to stderr so the CLI summary line on stdout stays
    clean. A file handler is added when ``config.LOG_FILE`` is set, or later
    through `attach_file`.
    """
    _loggers = {}
    _file_handler = None

    @classmethod
    def get_logger(cls, name=None):
        if name is None:
            name = cls.get_caller_filename()
        if name in cls._loggers:
            return cls._loggers[name]
        else:
            # Create and configure a new logger
            logger = logging.getLogger(f'maglattice.{name}')
            logger.setLevel(logging.DEBUG)  # Base level for all logs

            c_handler = logging.StreamHandler()
            c_handler.setLevel(logging.DEBUG if config.DEBUG else logging.INFO)
            c_handler.setFormatter(logging.Formatter(
                '%(name)s::%(funcName)s::line %(lineno)d - %(levelname)s - %(message)s'))
            logger.addHandler(c_handler)
            if config.LOG_FILE and cls._file_handler is None:
                cls._file_handler = cls._make_file_handler(config.LOG_FILE)
            if cls._file_handler is not None:
                logger.addHandler(cls._file_handler)
            cls._loggers[name] = logger
            return logger

    @classmethod
    def attach_file(cls, path):
        """
        Send every maglattice logger, existing and future ones, to ``path``
        as well as to the console.

        :param path: str - log file path
        :return: logging.FileHandler
        """
        if cls._file_handler is not None:
            for logger in cls._loggers.values():
                logger.removeHandler(cls._file_handler)
            cls._file_handler.close()
        cls._file_handler = cls._make_file_handler(path)
        for logger in cls._loggers.values():
            logger.addHandler(cls._file_handler)
        return cls._file_handler

    @staticmethod
    def _make_file_handler(path):
        f_handler = logging.FileHandler(path)
        f_handler.setFormatter(logging.Formatter(
            '%(asctime)s::%(name)s::%(funcName)s::line %(lineno)d - %(levelname)s - %(message)s',
            datefmt='%Y/%m/%d::%H/%M/%S'))
        return f_handler

    @staticmethod
    def get_caller_filename():
        # get the caller's stack frame and extract its filename
        frame_info = inspect.stack()[2]     # go 2 stacks down : get_caller_filename > get_logger > calling file
        path = frame_info.filename
        filename = splitext(basename(path))[0]
        if len(filename) < 2:
            # return entire path in case of failed filename extraction
            return path
        else:
            return filename
