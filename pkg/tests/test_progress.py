import threading

import pytest

from conjugate_reversibility.progress import ProgressTracker, create_log_callback, create_tqdm_callback

def test_tracker_counts_failures():
    calls = []
    tracker = ProgressTracker(3, lambda **kw: calls.append(kw))
    tracker.update("a")
    tracker.update("b", exit_code=3)
    assert tracker.completed == 2
    assert tracker.failed == 1
    assert tracker.percentage == pytest.approx(200 / 3)
    assert calls[1] == {"name": "b", "completed": 2, "total": 3, "exit_code": 3}


def test_tracker_is_thread_safe():
    tracker = ProgressTracker(400)
    threads = [threading.Thread(target=lambda: [tracker.update("x") for _ in range(100)]) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert tracker.completed == 400
    assert tracker.percentage == 100.0

def test_empty_tracker_percentage():
    assert ProgressTracker(0).percentage == 100.0

def test_log_callback(caplog):
    caplog.set_level("INFO", logger="conjugate_reversibility.progress")
    create_log_callback()(name="m.json", completed=1, total=2, exit_code=0)
    assert "[1/2] m.json: exit 0" in caplog.text

def test_tqdm_callback_runs_to_completion():
    callback = create_tqdm_callback("Testing")
    for k in range(1, 4):
        callback(name=f"m{k}", completed=k, total=3, exit_code=0 if k != 2 else 3)
