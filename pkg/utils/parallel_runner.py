"""
Parallel Task Runner
Executes independent queries over an immutable network on a thread pool
"""

import time
from concurrent.futures import ThreadPoolExecutor, as_completed, TimeoutError
from datetime import datetime, timezone
from typing import Any, Callable, Dict

from utils.logger import logger


class ParallelRunner:
    """Execute named tasks in parallel with per-task error capture"""

    def __init__(self, max_workers: int = 4, timeout_per_task: float = 120, grace: float = 10):
        """
        Initialize parallel runner

        Args:
            max_workers: Maximum parallel threads
            timeout_per_task: Timeout for each task in seconds
            grace: Seconds added once to the overall deadline
        """
        self.max_workers = max_workers
        self.timeout = timeout_per_task
        self.grace = grace

    def run_all(self, tasks: Dict[str, Callable[[], Any]]) -> Dict[str, Dict[str, Any]]:
        """
        Execute all tasks in parallel

        The whole run is bounded by ``timeout_per_task * len(tasks) + grace``.
        When that passes, unfinished tasks are recorded as timeouts and the
        call returns without waiting for them; a task already running keeps
        its thread until it finishes on its own.

        Args:
            tasks: Dict of {name: zero-argument callable}

        Returns:
            Dict of {name: result record}, keyed in the order of ``tasks``
        """
        if not tasks:
            return {}

        logger.info(f"📊 Starting parallel run ({len(tasks)} tasks, {self.max_workers} workers)")
        start_time = time.time()
        results: Dict[str, Dict[str, Any]] = {}

        executor = ThreadPoolExecutor(max_workers=self.max_workers)
        timed_out = False
        try:
            future_to_name = {
                executor.submit(self._execute_task, name, func): name
                for name, func in tasks.items()
            }

            try:
                for future in as_completed(future_to_name, timeout=self.timeout * len(tasks) + self.grace):
                    name = future_to_name[future]
                    try:
                        results[name] = future.result()
                    except Exception as e:
                        logger.error(f"❌ {name}: {e}")
                        results[name] = self._error_result(str(e))
            except TimeoutError:
                timed_out = True
                for future, name in future_to_name.items():
                    if name not in results:
                        future.cancel()
                        logger.error(f"❌ {name}: Timeout after {time.time() - start_time:.1f}s")
                        results[name] = self._error_result("Timeout", "TimeoutError")
        finally:
            executor.shutdown(wait=not timed_out, cancel_futures=timed_out)

        successful = sum(1 for r in results.values() if r['success'])
        logger.info(f"✅ Parallel run complete: {successful}/{len(tasks)} tasks in {time.time() - start_time:.1f}s")

        # Completion order is nondeterministic; report in submission order
        return {name: results[name] for name in tasks}

    def _execute_task(self, name: str, func: Callable[[], Any]) -> Dict[str, Any]:
        """Execute a single task, turning exceptions into result records"""
        start_time = time.time()

        try:
            logger.debug(f"🔄 Running {name}...")
            data = func()
            return {
                'success': True,
                'data': data,
                'error': None,
                'duration': time.time() - start_time,
                'timestamp': datetime.now(timezone.utc).isoformat()
            }

        except Exception as e:
            logger.warning(f"⚠️  {name} failed: {e}")
            return {
                'success': False,
                'data': None,
                'error': str(e),
                'error_type': type(e).__name__,
                'duration': time.time() - start_time,
                'timestamp': datetime.now(timezone.utc).isoformat()
            }

    def _error_result(self, error: str, error_type: str = "Exception") -> Dict[str, Any]:
        """Create error result"""
        return {
            'success': False,
            'data': None,
            'error': error,
            'error_type': error_type,
            'duration': 0,
            'timestamp': datetime.now(timezone.utc).isoformat()
        }
