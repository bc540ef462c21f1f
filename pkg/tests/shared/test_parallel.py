"""Ordered thread fan-out (shared.parallel)."""

import threading
import time

import pytest

from shared.parallel import chunked, ordered_map


def test_results_come_back_in_submission_order():
    def slow_first(i):
        time.sleep(0.02 if i == 0 else 0.0)
        return i * i

    assert ordered_map(slow_first, range(8), workers=4) == [i * i for i in range(8)]


def test_single_worker_runs_inline():
    seen = []
    ordered_map(lambda _: seen.append(threading.get_ident()), range(3), workers=1)
    assert set(seen) == {threading.get_ident()}


def test_chunked():
    assert chunked(10, 4) == [range(0, 4), range(4, 8), range(8, 10)]
    assert chunked(0, 4) == []


def test_chunk_size_must_be_positive():
    with pytest.raises(ValueError, match="positive"):
        chunked(10, 0)
