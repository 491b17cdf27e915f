"""
Thread-based parallel map.

Sweep rows and breadth-first distance rows are independent and read only
immutable graphs, so they are fanned out over a thread pool. numpy and
scipy release the GIL inside their kernels.
"""

import concurrent.futures
from dataclasses import dataclass
from typing import Any, Callable, Generic, Iterable, List, Optional, TypeVar

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class ParallelResult(Generic[R]):
    """Result of one item of a parallel map."""
    success: bool
    value: Optional[R]
    error: Optional[BaseException]
    task_id: int

    def unwrap(self) -> R:
        """Return the value or re-raise the captured error."""
        if self.error is not None:
            raise self.error
        return self.value  # type: ignore[return-value]


def run_parallel_threads(
    func: Callable[[T], R],
    items: Iterable[T],
    max_workers: Optional[int] = None,
) -> List[ParallelResult[R]]:
    """
    Run a function in parallel using threads.

    Args:
        func: Function to call for each item
        items: Items to process
        max_workers: Maximum number of worker threads (default: min(32, cpu_count + 4));
            ``1`` runs the items inline in order

    Returns:
        List of ParallelResult objects in same order as input items
    """
    items_list = list(items)

    if max_workers == 1 or len(items_list) <= 1:
        return [_call(func, item, idx) for idx, item in enumerate(items_list)]

    results: List[Any] = [None] * len(items_list)
    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
        future_to_idx = {
            executor.submit(func, item): idx
            for idx, item in enumerate(items_list)
        }

        for future in concurrent.futures.as_completed(future_to_idx):
            idx = future_to_idx[future]
            try:
                results[idx] = ParallelResult(
                    success=True, value=future.result(), error=None, task_id=idx
                )
            except Exception as e:
                results[idx] = ParallelResult(
                    success=False, value=None, error=e, task_id=idx
                )

    return results


def parallel_map(
    func: Callable[[T], R],
    items: Iterable[T],
    max_workers: Optional[int] = None,
) -> List[R]:
    """Like ``run_parallel_threads`` but re-raises the first captured error."""
    return [r.unwrap() for r in run_parallel_threads(func, items, max_workers)]


def _call(func: Callable[[T], R], item: T, idx: int) -> ParallelResult[R]:
    try:
        return ParallelResult(success=True, value=func(item), error=None, task_id=idx)
    except Exception as e:
        return ParallelResult(success=False, value=None, error=e, task_id=idx)
