"""fibgates: exact Fibonacci-anyon braiding gates"""

__version__ = "1.0.0"
__author__ = "fibgates developers"

from src import (
    number_field,
    braid,
    representation,
    gate_analysis,
    search_engine,
    approximator,
    verification,
    monitoring,
)

__all__ = [
    "number_field",
    "braid",
    "representation",
    "gate_analysis",
    "search_engine",
    "approximator",
    "verification",
    "monitoring",
]
