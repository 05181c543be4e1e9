import functools
import json
import os
import time
from datetime import datetime, timezone

from observability.logger import get_logger

logger = get_logger("Tracer")


def trace_command(func):
    """Decorator to trace command execution: config in, verdict out.

    Records go to the JSONL file named by BOUNDKEY_TRACE_FILE. Without it only
    the duration is logged at DEBUG.
    """
    @functools.wraps(func)
    def wrapper(self, *args, **kwargs):
        command_name = getattr(self, "name", self.__class__.__name__)
        start_time = time.time()

        _log_trace({
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "event": "command_start",
            "command": command_name,
            "args": [str(a) for a in args],
            "kwargs": {k: str(v) for k, v in kwargs.items()},
        })

        try:
            result = func(self, *args, **kwargs)
        except Exception as e:
            duration = time.time() - start_time
            _log_trace({
                "timestamp": datetime.now(timezone.utc).isoformat(),
                "event": "command_error",
                "command": command_name,
                "duration_seconds": duration,
                "error": str(e),
            })
            raise

        duration = time.time() - start_time
        logger.debug("%s finished in %.3fs", command_name, duration)
        _log_trace({
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "event": "command_end",
            "command": command_name,
            "duration_seconds": duration,
            "ok": getattr(result, "ok", None),
        })
        return result

    return wrapper


def _log_trace(data):
    """Append trace data to the configured JSONL file, if any."""
    path = os.environ.get("BOUNDKEY_TRACE_FILE")
    if not path:
        return
    try:
        with open(path, "a", encoding="utf-8") as f:
            f.write(json.dumps(data) + "\n")
    except Exception as e:  # pylint: disable=broad-exception-caught
        logger.error(f"Failed to write trace: {e}")
