"""Fan independent jobs out to worker threads with a timeout."""

import asyncio
import logging
from collections.abc import Callable, Sequence
from typing import TypeVar

from ..errors import GuardError

logger = logging.getLogger(__name__)

T = TypeVar("T")


async def gather_in_pool(
    jobs: Sequence[Callable[[], T]],
    threads: int = 1,
    timeout: float | None = None,  # seconds
) -> list[T]:
    """Run every job in a worker thread, at most `threads` at once; results keep submission order."""
    semaphore = asyncio.Semaphore(max(1, threads))

    async def run_one(job: Callable[[], T]) -> T:
        async with semaphore:
            return await asyncio.to_thread(job)

    logger.debug("running %d jobs on %d threads", len(jobs), threads)
    try:
        return list(await asyncio.wait_for(asyncio.gather(*(run_one(job) for job in jobs)), timeout=timeout))
    except asyncio.TimeoutError as exc:
        raise GuardError(f"{len(jobs)} jobs did not finish within {timeout} seconds") from exc
