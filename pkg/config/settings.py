"""
File: config/settings.py
Purpose:
    Загрузка и валидация конфигурации вычислителя из config.json.
    Предоставляет singleton объект settings для доступа к настройкам во всем приложении.

Responsibilities:
    - Загрузка конфигурации из JSON файла (если он есть)
    - Применение переменных окружения (WBU_TRUNC_CAP)
    - Валидация числовых параметров
    - Создание необходимых директорий

Key Design Decisions:
    - Используется singleton pattern (глобальный объект settings)
    - Отсутствие config.json не является ошибкой: CLI работает на значениях по умолчанию
    - Переменная окружения сильнее значения из файла
    - Валидация выполняется явно через метод validate()

Notes:
    - Файл config.json (если нужен) лежит в корне проекта, пример: config.example.json
    - Все числовые значения конвертируются через int()
"""
import os
import json
from pathlib import Path

# Базовый путь проекта
BASE_DIR = Path(__file__).parent.parent
CONFIG_FILE = BASE_DIR / "config.json"

# Переменная окружения для предела углубления усечения
TRUNC_CAP_ENV = "WBU_TRUNC_CAP"


class Settings:
    """
    Класс для хранения и управления настройками вычислителя.

    Attributes:
        LOG_LEVEL: Уровень логирования (DEBUG, INFO, WARNING, ERROR)
        LOG_FILE: Путь к файлу логов
        DATABASE_PATH: Путь к файлу базы данных SQLite (результаты bench/validate)
        TRUNC_CAP: Максимальный порядок усечения при итеративном углублении
        TRUNC_MARGIN: Запас к максимальной степени генераторов для начального усечения
        EXPONENT_CAP: Максимальный показатель степени при полной материализации идеалов ATW
        GUARD_MAX_VARS: Предел числа переменных для базисов Грёбнера
        GUARD_MAX_DEGREE: Предел степени генераторов для базисов Грёбнера
        PROFILE_CAP: Предел размера таблиц порядков в режиме order-only
        DEFAULT_MAX_STEPS: Число шагов раздутия по умолчанию
        DEFAULT_FUZZ: Число случайных проб в validate по умолчанию
        DEFAULT_SEED: Seed по умолчанию
        VALIDATE_TRUNC_CAP: Предел усечения для случайных идеалов validate (больше - пример пропускается)
        VALIDATE_GUARD_MAX_DEGREE: Предел степени базисов Грёбнера внутри validate
        GRID_VALUES: Значения координат детерминированной сетки точек для resolve
    """

    def __init__(self):
        """Загрузка настроек из config.json и окружения."""
        self._config = self._load_config()
        self._apply_config()

    def _load_config(self) -> dict:
        """Загрузить конфигурацию из config.json (пустой словарь, если файла нет)."""
        if not CONFIG_FILE.exists():
            return {}

        try:
            with open(CONFIG_FILE, 'r', encoding='utf-8') as f:
                return json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"Ошибка парсинга config.json: {e}")
        except Exception as e:
            raise ValueError(f"Ошибка при загрузке config.json: {e}")

    def _apply_config(self):
        """Применить настройки из конфига."""
        # Logging
        self.LOG_LEVEL: str = self._config.get("log_level", "WARNING")
        log_file = self._config.get("log_file")
        if log_file:
            self.LOG_FILE: str = log_file
        else:
            self.LOG_FILE: str = str(BASE_DIR / "logs" / "wbu.log")

        database_path = self._config.get("database_path")
        if database_path:
            self.DATABASE_PATH: str = database_path
        else:
            self.DATABASE_PATH: str = str(BASE_DIR / "database" / "runs.db")

        # Усечение рядов
        self.TRUNC_CAP: int = int(os.environ.get(TRUNC_CAP_ENV) or self._config.get("trunc_cap", "1024"))
        self.TRUNC_MARGIN: int = int(self._config.get("initial_trunc_margin", "2"))

        # Ограничения вычислений
        self.EXPONENT_CAP: int = int(self._config.get("exponent_cap", "64"))
        self.GUARD_MAX_VARS: int = int(self._config.get("guard_max_vars", "4"))
        self.GUARD_MAX_DEGREE: int = int(self._config.get("guard_max_degree", "12"))
        self.PROFILE_CAP: int = int(self._config.get("profile_cap", "200000"))

        # CLI
        self.DEFAULT_MAX_STEPS: int = int(self._config.get("default_max_steps", "10"))
        self.DEFAULT_FUZZ: int = int(self._config.get("default_fuzz", "1000"))
        self.DEFAULT_SEED: int = int(self._config.get("default_seed", "42"))
        self.VALIDATE_TRUNC_CAP: int = int(self._config.get("validate_trunc_cap", "24"))
        self.VALIDATE_GUARD_MAX_DEGREE: int = int(self._config.get("validate_guard_max_degree", "8"))
        self.GRID_VALUES: list = [int(v) for v in self._config.get("grid_values", [-1, 0, 1])]

    def validate(self) -> bool:
        """
        Валидация числовых параметров.
        Возвращает True если все параметры корректны.
        """
        positive = [
            ("trunc_cap", self.TRUNC_CAP),
            ("exponent_cap", self.EXPONENT_CAP),
            ("guard_max_vars", self.GUARD_MAX_VARS),
            ("guard_max_degree", self.GUARD_MAX_DEGREE),
            ("profile_cap", self.PROFILE_CAP),
            ("default_max_steps", self.DEFAULT_MAX_STEPS),
            ("validate_trunc_cap", self.VALIDATE_TRUNC_CAP),
            ("validate_guard_max_degree", self.VALIDATE_GUARD_MAX_DEGREE),
        ]

        invalid = [name for name, value in positive if value <= 0]
        if self.TRUNC_MARGIN < 0:
            invalid.append("initial_trunc_margin")
        if self.LOG_LEVEL.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            invalid.append("log_level")
        if not self.GRID_VALUES:
            invalid.append("grid_values")

        if invalid:
            raise ValueError(
                f"Некорректные параметры конфигурации: {', '.join(invalid)}"
            )

        return True

    def ensure_directories(self):
        """Создает директории БД и логов (пустой LOG_FILE - логи только в stderr)."""
        for path in (self.DATABASE_PATH, self.LOG_FILE):
            if path:
                Path(path).parent.mkdir(parents=True, exist_ok=True)


# Создаем экземпляр настроек
settings = Settings()
