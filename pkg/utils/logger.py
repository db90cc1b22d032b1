"""
File: utils/logger.py
Purpose:
    Логирование вычислителя: stderr и файл, stdout остается за отчетами CLI.

Responsibilities:
    - setup_logger: логгер с консольным и (опционально) файловым обработчиком
    - set_level: смена уровня логгера и всех его обработчиков (флаг --log-level)

Key Design Decisions:
    - TimeFormatter берет время из record.created и не изменяет record.msg,
      поэтому метка не дублируется при нескольких обработчиках
    - Пустой settings.LOG_FILE отключает файловый обработчик
    - Формат: [timestamp] level - name - message

Notes:
    - Логгер является singleton (глобальный объект logger), модули пишут в него напрямую
"""
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional, TextIO, Union

from config.settings import settings

LOG_FORMAT = "%(levelname)s - %(name)s - %(message)s"
TIME_FORMAT = "%Y-%m-%d %H:%M:%S"


class TimeFormatter(logging.Formatter):
    """Форматтер с временной меткой [YYYY-MM-DD HH:MM:SS] перед строкой."""

    def format(self, record: logging.LogRecord) -> str:
        timestamp = datetime.fromtimestamp(record.created).strftime(TIME_FORMAT)
        return f"[{timestamp}] {super().format(record)}"


def _level_of(level: Union[str, int, None]) -> int:
    if level is None:
        level = settings.LOG_LEVEL
    if isinstance(level, str):
        return getattr(logging, level.upper(), logging.WARNING)
    return level


def setup_logger(name: str = "wbu", level: Union[str, int, None] = None, stream: TextIO = sys.stderr,
                 log_file: Optional[str] = None) -> logging.Logger:
    """
    Настройка логгера.

    Args:
        name: Имя логгера
        level: Уровень (строка или число; None - settings.LOG_LEVEL)
        stream: Поток консольного обработчика
        log_file: Путь к файлу логов (None - settings.LOG_FILE, пустая строка - без файла)

    Returns:
        Настроенный логгер
    """
    level = _level_of(level)
    logger = logging.getLogger(name)
    logger.setLevel(level)
    logger.propagate = False

    # Повторная настройка не должна плодить обработчики
    logger.handlers.clear()

    formatter = TimeFormatter(fmt=LOG_FORMAT)

    console_handler = logging.StreamHandler(stream)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    log_file = settings.LOG_FILE if log_file is None else log_file
    if log_file:
        log_file_path = Path(log_file)
        log_file_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file_path, encoding="utf-8")
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def set_level(level: Union[str, int], target: Optional[logging.Logger] = None) -> int:
    """
    Сменить уровень логгера и его обработчиков.

    Returns:
        Установленный числовой уровень
    """
    target = target or logger
    value = _level_of(level)
    target.setLevel(value)
    for handler in target.handlers:
        handler.setLevel(value)
    return value


# Создаем основной логгер
logger = setup_logger("wbu")
