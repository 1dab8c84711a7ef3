import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Sequence

from lib.utils.misc import split_iterable_by_chunk
from tqdm import tqdm

logger = logging.getLogger(__name__)


def _run_chunk(func: Callable[[int], Any], chunk: tuple[int, ...]) -> list[tuple[int, Any]]:
    return [(index, func(index)) for index in chunk]


def parallel_map(
    func: Callable[[int], Any],
    indices: Sequence[int],
    threads: int = 1,
    chunk_size: int | None = None,
    progress: bool = False,
    description: str | None = None,
) -> list[Any]:
    """
    Evaluates func on every index, in worker processes when threads > 1.
    Results come back ordered by index, so the output never depends on scheduling.
    :param func: Picklable callable taking a trial index (module-level function or functools.partial)
    :param indices: Trial indices to evaluate
    :param threads: Number of worker processes, 1 runs inline
    :param chunk_size: Indices per submitted task, defaults to an even split over 4 tasks per worker
    :param progress: Show a tqdm progress bar on stderr
    :param description: Label for the progress bar
    :return: List of results sorted by index
    """
    indices = list(indices)

    if threads <= 1 or len(indices) <= 1:
        iterator = tqdm(indices, desc=description, disable=not progress)
        return [func(index) for index in iterator]

    if chunk_size is None:
        chunk_size = max(1, len(indices) // (threads * 4))

    chunks = list(split_iterable_by_chunk(indices, chunk_size))
    logger.debug(f"Dispatching {len(indices)} tasks in {len(chunks)} chunks to {threads} workers")
    collected: list[tuple[int, Any]] = []

    with ProcessPoolExecutor(max_workers=threads) as executor:
        futures = [executor.submit(_run_chunk, func, chunk) for chunk in chunks]

        for future in tqdm(futures, desc=description, disable=not progress):
            collected.extend(future.result())

    collected.sort(key=lambda item: item[0])

    return [result for _, result in collected]
