"""JSON matrix exchange format: ``{"dims": [...], "re": [[...]], "im": [[...]]}``."""
import json
from typing import Any, Dict

import numpy as np

from bound_key.core.operator import MultipartiteOperator
from bound_key.errors import BoundKeyError, ExchangeFormatError


def operator_to_dict(op: MultipartiteOperator) -> Dict[str, Any]:
    return {
        "dims": list(op.dims),
        "re": op.data.real.tolist(),
        "im": op.data.imag.tolist(),
    }


def operator_from_dict(obj: Dict[str, Any]) -> MultipartiteOperator:
    if not isinstance(obj, dict):
        raise ExchangeFormatError("Matrix document must be a JSON object")
    missing = [k for k in ("dims", "re") if k not in obj]
    if missing:
        raise ExchangeFormatError(f"Matrix document is missing keys: {missing}")
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError) as e:
        raise ExchangeFormatError(f"Matrix entries are not numeric: {e}") from e
    if re.shape != im.shape:
        raise ExchangeFormatError(f"'re' shape {re.shape} differs from 'im' shape {im.shape}")
    try:
        return MultipartiteOperator(tuple(obj["dims"]), re + 1j * im)
    except BoundKeyError as e:
        raise ExchangeFormatError(str(e)) from e
    except (TypeError, ValueError) as e:
        raise ExchangeFormatError(f"Invalid dims {obj['dims']!r}: {e}") from e


def dumps_operator(op: MultipartiteOperator) -> str:
    return json.dumps(operator_to_dict(op))


def loads_operator(text: str) -> MultipartiteOperator:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ExchangeFormatError(f"Not valid JSON: {e}") from e
    return operator_from_dict(obj)
