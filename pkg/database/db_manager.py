"""
Менеджер базы данных журнала прогонов.
"""
import json
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional

from sqlalchemy import create_engine
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import Session, sessionmaker

from config.settings import settings
from database.models import Base, BenchRecord, ValidationRun
from expr_io.report import format_rational
from utils.logger import logger


class DatabaseManager:
    """Класс для управления базой данных."""

    def __init__(self, database_path: Optional[str] = None):
        """
        Инициализация менеджера БД.

        Движок создается лениво: команды invariant/centre не трогают диск.
        """
        self.database_path = database_path
        self._engine = None
        self._session_factory = None

    @property
    def engine(self):
        if self._engine is None:
            path = self.database_path or settings.DATABASE_PATH
            self._engine = create_engine(
                f'sqlite:///{path}',
                echo=False,
                connect_args={'check_same_thread': False}
            )
            self._session_factory = sessionmaker(autocommit=False, autoflush=False, bind=self._engine)
            self.init_db()
        return self._engine

    def init_db(self):
        """Инициализация базы данных (создание таблиц)."""
        try:
            Base.metadata.create_all(bind=self.engine)
            logger.info("База данных инициализирована")
        except Exception as e:
            logger.error(f"Ошибка при инициализации БД: {e}")
            raise

    def get_session(self) -> Session:
        """Получить сессию БД."""
        _ = self.engine
        return self._session_factory()

    def save_bench_records(self, suite: str, rows: Iterable[Dict[str, Any]]) -> int:
        """
        Сохранить строки bench.

        Args:
            suite: Идентификатор набора
            rows: Словари с ключами case, method, invariant, counters, time

        Returns:
            Число сохраненных записей
        """
        session = self.get_session()
        try:
            records = [
                BenchRecord(
                    suite=suite,
                    case_id=row["case"],
                    method=row["method"],
                    invariant=json.dumps([format_rational(Fraction(a)) for a in row["invariant"]]),
                    counters=json.dumps(row.get("counters", {}), sort_keys=True),
                    wall_time=float(row.get("time", 0.0)),
                )
                for row in rows
            ]
            session.add_all(records)
            session.commit()
            logger.info(f"Сохранено {len(records)} строк bench (набор {suite})")
            return len(records)
        except SQLAlchemyError as e:
            session.rollback()
            logger.error(f"Ошибка при сохранении результатов bench: {e}")
            raise
        finally:
            session.close()

    def save_validation_run(self, suite: str, seed: int, fuzz: int, samples: int,
                            passed: bool, failure: Optional[str] = None) -> ValidationRun:
        """Сохранить результат набора свойств."""
        session = self.get_session()
        try:
            run = ValidationRun(suite=suite, seed=seed, fuzz=fuzz, samples=samples,
                                passed=passed, failure=failure)
            session.add(run)
            session.commit()
            session.refresh(run)
            session.expunge(run)
            logger.debug(f"Сохранен результат validate: {suite} (passed={passed})")
            return run
        except SQLAlchemyError as e:
            session.rollback()
            logger.error(f"Ошибка при сохранении результата validate: {e}")
            raise
        finally:
            session.close()

    def get_recent_bench_records(self, limit: int = 50, case_id: Optional[str] = None) -> List[BenchRecord]:
        """
        Последние строки bench.

        Args:
            limit: Максимальное количество записей
            case_id: Фильтр по примеру (опционально)

        Returns:
            Список BenchRecord, новые первыми
        """
        session = self.get_session()
        try:
            query = session.query(BenchRecord)
            if case_id:
                query = query.filter(BenchRecord.case_id == case_id)
            records = query.order_by(BenchRecord.created_at.desc(), BenchRecord.id.desc()).limit(limit).all()
            for record in records:
                session.expunge(record)
            return records
        finally:
            session.close()


# Создаем глобальный экземпляр менеджера БД
db_manager = DatabaseManager()
