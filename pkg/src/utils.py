"""Utility Functions for fibgates"""
import hashlib
import json
import logging
import time
from contextlib import contextmanager
from datetime import datetime
from typing import Dict, Iterator, List, Optional

logger = logging.getLogger(__name__)


def setup_logging(level: str = 'INFO'):
    """Setup logging configuration"""
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )


def hash_value(value: str) -> str:
    """SHA-256 hex digest of a string"""
    return hashlib.sha256(value.encode()).hexdigest()


def format_timestamp(dt: Optional[datetime] = None) -> str:
    """Format datetime to ISO format string"""
    if dt is None:
        dt = datetime.now()
    return dt.isoformat()


def format_float(x: float) -> str:
    """17 significant digits, enough to round-trip a double"""
    return f"{x:.17g}"


def serialize_record(record: Dict) -> str:
    """Serialize a result record to one JSON line"""
    return json.dumps(record, default=str)


class PerformanceMonitor:
    """Accumulate wall-clock timings per operation"""

    def __init__(self):
        self.timings: Dict[str, List[float]] = {}

    def record_time(self, operation: str, duration_ms: float):
        """Record operation timing"""
        self.timings.setdefault(operation, []).append(duration_ms)

    @contextmanager
    def timed(self, operation: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.record_time(operation, (time.perf_counter() - start) * 1000.0)

    def get_avg_time(self, operation: str) -> float:
        """Get average time for operation"""
        if not self.timings.get(operation):
            return 0.0
        return sum(self.timings[operation]) / len(self.timings[operation])

    def get_total_time(self, operation: str) -> float:
        return sum(self.timings.get(operation, []))

    def get_summary(self) -> Dict:
        """Get performance summary"""
        return {
            op: self.get_avg_time(op) for op in self.timings
        }
