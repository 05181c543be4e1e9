"""Atomic writes for report artifacts."""
import tempfile
from pathlib import Path
from threading import Lock
from typing import Union

from observability.logger import get_logger

logger = get_logger("ReportStore")

_lock = Lock()


def atomic_write(path: Union[str, Path], data: str) -> Path:
    """Write through a temporary file in the target directory, then replace."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with _lock:
        with tempfile.NamedTemporaryFile("w", dir=str(target.parent), delete=False, encoding="utf-8", newline="") as tf:
            tf.write(data)
            tmp = tf.name
        Path(tmp).replace(target)
    logger.debug("Wrote %d bytes to %s", len(data), target)
    return target
