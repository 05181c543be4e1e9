"""Number formatting for reports: 12 significant digits, exact values as ratios."""
from fractions import Fraction
from typing import Any, Union

import numpy as np

SIGNIFICANT_DIGITS = 12

Number = Union[int, float, Fraction, np.floating, np.integer]


def round_sig(x: float, digits: int = SIGNIFICANT_DIGITS) -> float:
    if x == 0 or not np.isfinite(x):
        return float(x)
    return float(f"{float(x):.{digits}g}")


def ratio_string(value: Union[Fraction, int]) -> str:
    """'11/40' for Fraction(11, 40); integers keep their plain form."""
    frac = Fraction(value)
    if frac.denominator == 1:
        return str(frac.numerator)
    return f"{frac.numerator}/{frac.denominator}"


def to_jsonable(value: Any) -> Any:
    """Recursively convert numpy scalars, Fractions and tuples; round floats."""
    if isinstance(value, Fraction):
        return ratio_string(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return round_sig(float(value))
    if isinstance(value, complex):
        return {"re": round_sig(value.real), "im": round_sig(value.imag)}
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value
