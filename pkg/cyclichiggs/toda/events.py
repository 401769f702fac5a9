"""Progress callbacks for long-running solves."""

import asyncio
import inspect
import time
from typing import Callable, Optional

from logorator import Logger


def emit(on_progress: Optional[Callable], payload: dict, logging: bool = True):
    """Deliver ``payload`` from synchronous code; coroutine callbacks run to completion."""
    if on_progress is None:
        return
    try:
        payload["ts"] = time.time()
        if inspect.iscoroutinefunction(on_progress):
            asyncio.run(on_progress(payload))
        else:
            on_progress(payload)
    except Exception as e:
        if logging:
            Logger.note(f"⚠️ on_progress callback error: {e}")


async def aemit(on_progress: Optional[Callable], payload: dict, logging: bool = True):
    if on_progress is None:
        return
    try:
        payload["ts"] = time.time()
        if inspect.iscoroutinefunction(on_progress):
            await on_progress(payload)
        else:
            on_progress(payload)
    except Exception as e:
        if logging:
            Logger.note(f"⚠️ on_progress callback error: {e}")
