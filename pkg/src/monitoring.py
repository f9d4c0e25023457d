"""Monitoring: prometheus metrics for search and approximation runs"""
import logging
from collections import defaultdict
from datetime import datetime
from typing import Dict, Optional

from prometheus_client import Counter, Gauge, Histogram, start_http_server

logger = logging.getLogger(__name__)

# Prometheus metrics
words_visited_total = Counter('fibgates_words_visited_total', 'Braid words visited', ['length'])
filter_survivors_total = Counter('fibgates_filter_survivors_total', 'Words passing the float leakage filter')
leakage_free_total = Counter('fibgates_leakage_free_total', 'Words certified leakage-free exactly')
entangling_total = Counter('fibgates_entangling_total', 'Leakage-free entangling gates found')
shard_seconds = Histogram('fibgates_shard_seconds', 'Wall time per search shard')
off_diagonal = Gauge('fibgates_off_diagonal', 'Off-diagonal magnitude b_k of the latest iterate')
iterations_total = Counter('fibgates_iterations_total', 'Approximation iterations performed')


class MetricsCollector:
    """Mirror of the prometheus series, recorded in the driver process"""

    def __init__(self):
        self.visited = defaultdict(int)
        self.survivors = 0
        self.leakage_free = 0
        self.entangling = 0
        self.shard_times = []
        self.iterations = 0
        self.last_off_diagonal: Optional[float] = None

    def record_shard(self, visited_by_length: Dict[int, int], survivors: int,
                     leakage_free: int, entangling: int, seconds: float):
        """Record the counts returned by one finished search shard"""
        for length, count in visited_by_length.items():
            self.visited[length] += count
            words_visited_total.labels(length=str(length)).inc(count)
        self.survivors += survivors
        self.leakage_free += leakage_free
        self.entangling += entangling
        filter_survivors_total.inc(survivors)
        leakage_free_total.inc(leakage_free)
        entangling_total.inc(entangling)
        self.shard_times.append(seconds)
        shard_seconds.observe(seconds)

    def record_iteration(self, b: float):
        """Record one approximation step"""
        self.iterations += 1
        self.last_off_diagonal = b
        iterations_total.inc()
        off_diagonal.set(b)

    def get_metrics(self) -> Dict:
        """Get current metrics"""
        avg_shard = sum(self.shard_times) / max(len(self.shard_times), 1)
        return {
            'words_visited': sum(self.visited.values()),
            'words_visited_by_length': dict(sorted(self.visited.items())),
            'filter_survivors': self.survivors,
            'leakage_free': self.leakage_free,
            'entangling': self.entangling,
            'average_shard_seconds': f"{avg_shard:.3f}",
            'iterations': self.iterations,
            'last_off_diagonal': self.last_off_diagonal,
            'timestamp': datetime.now().isoformat()
        }


def start_metrics_server(port: int):
    """Expose the prometheus registry over HTTP"""
    start_http_server(port)
    logger.info(f"Metrics server listening on port {port}")
