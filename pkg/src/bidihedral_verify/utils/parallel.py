"""Thread-pool fan-out for independent verification work.

Results always come back in input order, so the worker count changes only
wall-clock time, never output.
"""

from __future__ import annotations

import concurrent.futures
from typing import Callable, List, Optional, Sequence, TypeVar

from bidihedral_verify.utils.logger import log_info, log_warning

T = TypeVar("T")
R = TypeVar("R")


def run_parallel(
    func: Callable[[T], R],
    items: Sequence[T],
    max_workers: int = 1,
    label: str = "task",
    progress_every: Optional[int] = None,
    on_error: Optional[Callable[[T, Exception], R]] = None,
) -> List[R]:
    """Apply ``func`` to every item, using up to ``max_workers`` threads.

    Args:
        func: Callable applied to each item
        items: Inputs, in the order results are wanted
        max_workers: Maximum number of concurrent workers (1 runs inline)
        label: Name used in progress messages
        progress_every: Log progress after this many completions
        on_error: Produces a substitute result when ``func`` raises; without it
            the first exception propagates

    Returns:
        One result per item, in input order
    """
    if not items:
        return []

    results: List[Optional[R]] = [None] * len(items)

    def settle(index: int, outcome: Callable[[], R]) -> None:
        try:
            results[index] = outcome()
        except Exception as e:
            if on_error is None:
                raise
            log_warning(f"{label} {index} failed: {e}")
            results[index] = on_error(items[index], e)

    if max_workers <= 1 or len(items) == 1:
        for index, item in enumerate(items):
            settle(index, lambda item=item: func(item))
            if progress_every and (index + 1) % progress_every == 0:
                log_info(f"{label} progress: {index + 1}/{len(items)}")
        return results  # type: ignore[return-value]

    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
        future_to_index = {executor.submit(func, item): index for index, item in enumerate(items)}

        completed = 0
        for future in concurrent.futures.as_completed(future_to_index):
            index = future_to_index[future]
            settle(index, future.result)
            completed += 1
            if progress_every and completed % progress_every == 0:
                log_info(f"{label} progress: {completed}/{len(items)}")

    return results  # type: ignore[return-value]
