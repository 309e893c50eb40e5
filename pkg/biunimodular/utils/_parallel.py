import logging

from pqdm.threads import pqdm
from typing_extensions import Any, Callable, List, Mapping, Optional, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(
    func: Callable[[T], R],
    items: Sequence[T],
    workers: int = 1,
    *,
    pqdm_kwargs: Optional[Mapping[str, Any]] = None,
) -> List[R]:
    """Apply `func` to every item, in a thread pool when `workers > 1`.

    Results come back in input order whatever the worker count.

    Parameters:
        func: a pure function of one item.
        items: the work items.
        workers: number of threads.
        pqdm_kwargs: Additional keyword arguments to pass to pqdm, a parallel
            processing library. Default is to use immediate exception behavior,
            no progress bar and the number of jobs given by `workers`.

    Returns:
        The list of results.
    """
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    pqdm_kwargs = {
        "n_jobs": workers,
        "exception_behaviour": "immediate",
        "disable": True,
        **(pqdm_kwargs or {}),
    }
    return pqdm(items, func, **pqdm_kwargs)


def first_in_batches(
    func: Callable[[int], R],
    count: int,
    accept: Callable[[R], bool],
    workers: int = 1,
    *,
    pqdm_kwargs: Optional[Mapping[str, Any]] = None,
) -> tuple[Optional[int], List[R]]:
    """Evaluate `func(0), func(1), ...` until one result is accepted.

    Indices are processed in batches of `workers`, like pages of a paginated
    query; the accepted result with the lowest index wins so the outcome does
    not depend on the worker count.

    Returns:
        The index of the first accepted result (or None) and every result
        computed up to and including it.
    """
    results: List[R] = []
    batch = max(1, workers)
    for start in range(0, count, batch):
        indices = list(range(start, min(start + batch, count)))
        page = parallel_map(func, indices, workers, pqdm_kwargs=pqdm_kwargs)
        for index, result in zip(indices, page):
            results.append(result)
            if accept(result):
                logger.debug(f"Accepted result at index {index}")
                return index, results
    return None, results
