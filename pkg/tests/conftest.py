"""
Общие фикстуры тестов: БД и лог во временных путях.
"""
import sys
import tempfile
from pathlib import Path

# Добавляем корневую директорию проекта в путь
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import pytest

from config.settings import settings

# Логгер создается при импорте utils.logger, поэтому путь к логу задается до него
_session_dir = Path(tempfile.mkdtemp(prefix="wbu-tests-"))
settings.LOG_FILE = str(_session_dir / "wbu.log")


@pytest.fixture(autouse=True)
def isolated_database(tmp_path):
    """Каждый тест пишет в свою SQLite БД."""
    from database.db_manager import db_manager

    settings.DATABASE_PATH = str(tmp_path / "runs.db")
    db_manager._engine = None
    db_manager._session_factory = None
    yield db_manager
    if db_manager._engine is not None:
        db_manager._engine.dispose()
    db_manager._engine = None
    db_manager._session_factory = None
