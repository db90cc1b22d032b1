"""
File: database/models.py
Purpose:
    Определение SQLAlchemy моделей для журнала прогонов bench и validate.

Responsibilities:
    - Определение структуры таблиц БД
    - Текстовое хранение инвариантов и счетчиков (JSON)

Key Design Decisions:
    - Используется SQLAlchemy ORM для работы с БД
    - Все модели наследуются от declarative_base()
    - Индексы на полях, по которым строятся выборки (suite, case_id, created_at)
    - Инварианты хранятся строками "p/q", чтобы не терять точность

Notes:
    - База данных: SQLite
    - Все даты хранятся в UTC
"""
from datetime import datetime

from sqlalchemy import Boolean, Column, DateTime, Float, Integer, String, Text
from sqlalchemy.orm import declarative_base

Base = declarative_base()


class BenchRecord(Base):
    """
    Строка сравнения методов в команде bench.

    Attributes:
        id: Внутренний ID записи (primary key)
        suite: Идентификатор набора примеров (indexed)
        case_id: Идентификатор примера (indexed)
        method: Тег метода ("1", "2", "atw")
        invariant: Инвариант в виде JSON-списка строк "p/q"
        counters: JSON со счетчиками работы
        wall_time: Время вычисления в секундах
        created_at: Время записи (indexed)
    """
    __tablename__ = 'bench_records'

    id = Column(Integer, primary_key=True, autoincrement=True)
    suite = Column(String(50), nullable=False, index=True)
    case_id = Column(String(100), nullable=False, index=True)
    method = Column(String(10), nullable=False)
    invariant = Column(Text, nullable=False)
    counters = Column(Text, nullable=True)
    wall_time = Column(Float, default=0.0, nullable=False)
    created_at = Column(DateTime, default=datetime.utcnow, nullable=False, index=True)

    def __repr__(self):
        return f"<BenchRecord(case_id={self.case_id}, method={self.method}, invariant={self.invariant})>"


class ValidationRun(Base):
    """
    Результат одного набора свойств в команде validate.

    Attributes:
        id: Внутренний ID записи (primary key)
        suite: Имя набора свойств (indexed)
        seed: Зерно генератора
        fuzz: Запрошенное число примеров
        samples: Фактически проверенное число примеров
        passed: Пройден ли набор
        failure: Описание первого контрпримера (nullable)
        created_at: Время записи (indexed)
    """
    __tablename__ = 'validation_runs'

    id = Column(Integer, primary_key=True, autoincrement=True)
    suite = Column(String(100), nullable=False, index=True)
    seed = Column(Integer, nullable=False)
    fuzz = Column(Integer, nullable=False)
    samples = Column(Integer, default=0, nullable=False)
    passed = Column(Boolean, default=True, nullable=False)
    failure = Column(Text, nullable=True)
    created_at = Column(DateTime, default=datetime.utcnow, nullable=False, index=True)

    def __repr__(self):
        return f"<ValidationRun(suite={self.suite}, seed={self.seed}, passed={self.passed})>"
