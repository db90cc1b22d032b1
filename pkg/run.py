"""
File: run.py
Purpose:
    Главная точка входа приложения. Передает аргументы командной строки в cli.app.

Responsibilities:
    - Валидация конфигурации перед запуском
    - Создание директорий логов и БД
    - Запуск подкоманды и возврат кода выхода
    - Обработка критических ошибок

Key Design Decisions:
    - Ожидаемые ошибки (разбор, математика) отображаются в коды выхода внутри cli.app.main
    - Здесь остаются только прерывание пользователем и непредвиденные ошибки
    - Все ошибки логируются перед завершением

Notes:
    - Пример: python run.py invariant --vars x,y,z --ideal "x^2-y^2*z" --method 2
"""
import sys

from config.constants import EXIT_FAILURE
from config.settings import settings
from utils.logger import logger


def main() -> int:
    """Главная функция запуска."""
    try:
        # Валидация настроек
        settings.validate()
        settings.ensure_directories()

        from cli.app import main as cli_main
        return cli_main(sys.argv[1:])

    except KeyboardInterrupt:
        logger.info("Остановка приложения...")
        return EXIT_FAILURE
    except Exception as e:
        logger.error(f"Критическая ошибка: {e}")
        raise


if __name__ == "__main__":
    sys.exit(main())
