"""Sliding-window rate limiting shared by all provider clients.

The limiter is the one synchronized component of the provider stack: calls
from concurrent sessions funnel through one instance per policy, and it
never admits more than max_requests in any window_s-long interval.
"""

from __future__ import annotations

import threading
import time
from collections import deque
from dataclasses import dataclass


@dataclass(frozen=True)
class RateLimitPolicy:
    max_requests: int
    window_s: float

    def __post_init__(self):
        if self.max_requests <= 0 or self.window_s <= 0:
            raise ValueError("max_requests and window_s must be positive")


@dataclass(frozen=True)
class Decision:
    proceed: bool
    retry_after_s: float | None = None


class SlidingWindowLimiter:
    """Admission control over a dense sliding window of admit timestamps."""

    def __init__(self, policy: RateLimitPolicy):
        self.policy = policy
        self._admitted = deque()
        self._lock = threading.Lock()

    def acquire_rate_slot(self, now: float) -> Decision:
        """Admit (and record) the request at time `now`, or say how long to wait.

        Admission counts requests in the half-open window (now - window_s,
        now]; a request exactly one window after another does not collide.
        """
        with self._lock:
            horizon = now - self.policy.window_s
            while self._admitted and self._admitted[0] <= horizon:
                self._admitted.popleft()
            if len(self._admitted) < self.policy.max_requests:
                self._admitted.append(now)
                return Decision(True)
            return Decision(False, self._admitted[0] + self.policy.window_s - now)


def acquire_rate_slot(
    limiter: SlidingWindowLimiter, now: float | None = None
) -> Decision:
    return limiter.acquire_rate_slot(time.time() if now is None else now)


def wait_for_slot(limiter, clock=time.time, sleep=time.sleep, max_wait_s=120.0):
    """Block until the limiter admits the caller; raises RuntimeError after
    max_wait_s of accumulated waiting (a stuck limiter is a config problem)."""
    if limiter is None:
        return
    waited = 0.0
    while True:
        decision = limiter.acquire_rate_slot(clock())
        if decision.proceed:
            return
        delay = max(decision.retry_after_s or 0.0, 1e-3)
        if waited + delay > max_wait_s:
            raise RuntimeError(f"rate limiter kept us waiting beyond {max_wait_s}s")
        sleep(delay)
        waited += delay
