import os
import psutil
import logging
from datetime import datetime


class RunMonitor:
    """Tracks resource usage and wall time of one command run"""
    def __init__(self, command: str):
        self.command = command
        self.start_time = datetime.now()
        self.process = psutil.Process(os.getpid())

    def get_run_stats(self) -> dict:
        """Get resource usage of this process and the host"""
        return {
            'command': self.command,
            'cpu_percent': psutil.cpu_percent(),
            'memory_percent': psutil.virtual_memory().percent,
            'rss_mb': self.process.memory_info().rss / (1024 * 1024),
            'cpu_count': psutil.cpu_count(),
            'wall_seconds': (datetime.now() - self.start_time).total_seconds(),
        }

    def log_stats(self) -> dict:
        """Log run stats and return them for the manifest"""
        stats = self.get_run_stats()
        logging.info(f"Run Stats: {stats}")
        return stats
