"""
Runs independent seeded trials on a small pool of worker threads.

Trial i receives `np.random.default_rng(SeedSequence(seed).spawn(trials)[i])`,
so results depend only on (seed, i) and never on scheduling.
"""

from __future__ import annotations

import logging
import queue
import threading
from dataclasses import dataclass
from typing import Callable, Generic, List, Optional, TypeVar

import numpy as np

from constants.report_constants import DEFAULT_WORKER_COUNT
from services.errors import UsageError

logger = logging.getLogger(__name__)

T = TypeVar("T")
TrialFn = Callable[[int, np.random.Generator], T]


@dataclass(frozen=True)
class QueuedTrial:
    index: int
    seed_sequence: np.random.SeedSequence


@dataclass
class TrialOutcome(Generic[T]):
    index: int
    value: Optional[T] = None
    error: Optional[BaseException] = None


def trial_generators(seed: int, trials: int) -> List[np.random.Generator]:
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(trials)]


def _trial_worker(
    trial_queue: queue.Queue,
    stop_event: threading.Event,
    worker_name: str,
    trial_fn: TrialFn,
    outcomes: List[Optional[TrialOutcome]],
) -> None:
    while not stop_event.is_set():
        try:
            queued = trial_queue.get(timeout=0.1)
        except queue.Empty:
            continue

        try:
            value = trial_fn(queued.index, np.random.default_rng(queued.seed_sequence))
            outcomes[queued.index] = TrialOutcome(index=queued.index, value=value)
        except Exception as exc:
            logger.debug("Worker %s failed trial %s: %s", worker_name, queued.index, exc)
            outcomes[queued.index] = TrialOutcome(index=queued.index, error=exc)
        finally:
            trial_queue.task_done()


def run_trials(trial_fn: TrialFn, trials: int, seed: int, workers: int = DEFAULT_WORKER_COUNT) -> List[T]:
    """
    Run `trial_fn(index, rng)` for every trial index and return the values in index order.

    The first failing trial (lowest index) has its exception re-raised after all workers stop.
    """
    if trials < 1:
        raise UsageError(f"trials must be >= 1, got {trials}.")
    if workers < 1:
        raise UsageError(f"workers must be >= 1, got {workers}.")

    trial_queue: queue.Queue = queue.Queue()
    for index, child in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        trial_queue.put(QueuedTrial(index=index, seed_sequence=child))

    outcomes: List[Optional[TrialOutcome]] = [None] * trials
    stop_event = threading.Event()
    threads = [
        threading.Thread(
            target=_trial_worker,
            args=(trial_queue, stop_event, f"trial-worker-{number}", trial_fn, outcomes),
            name=f"trial-worker-{number}",
            daemon=True,
        )
        for number in range(min(workers, trials))
    ]
    for thread in threads:
        thread.start()
    try:
        trial_queue.join()
    finally:
        stop_event.set()
        for thread in threads:
            thread.join()

    for outcome in outcomes:
        if outcome is not None and outcome.error is not None:
            raise outcome.error
    logger.debug("Completed %s trials on %s workers (seed=%s).", trials, len(threads), seed)
    return [outcome.value for outcome in outcomes]
