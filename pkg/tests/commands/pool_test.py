import threading
import time

import pytest

from secrecy_regions.commands.pool import gather_in_pool
from secrecy_regions.errors import GuardError


async def test_results_keep_submission_order():
    def job(i):
        time.sleep(0.01 * (5 - i))
        return i * i

    results = await gather_in_pool([lambda i=i: job(i) for i in range(5)], threads=5)
    assert results == [0, 1, 4, 9, 16]


async def test_concurrency_is_bounded():
    lock = threading.Lock()
    active, peak = 0, 0

    def job():
        nonlocal active, peak
        with lock:
            active += 1
            peak = max(peak, active)
        time.sleep(0.02)
        with lock:
            active -= 1

    await gather_in_pool([job] * 8, threads=2)
    assert 1 <= peak <= 2


async def test_timeout_is_a_guard_violation():
    with pytest.raises(GuardError, match="did not finish"):
        await gather_in_pool([lambda: time.sleep(0.5)], timeout=0.05)


async def test_no_jobs():
    assert await gather_in_pool([]) == []
