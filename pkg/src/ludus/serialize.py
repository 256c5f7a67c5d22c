"""JSON conventions shared by the command line: rationals as "p/q", floats to 12
significant digits, complex numbers as ``[re, im]`` pairs."""

import json
import math
from enum import Enum
from fractions import Fraction

import numpy as np

from .lp import to_fraction

__all__ = ["to_jsonable", "dumps", "parse_number", "parse_numbers", "parse_complex_matrix", "parse_mask"]

SIG_DIGITS = 12


def _float(x: float):
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    r = float(f"{x:.{SIG_DIGITS}g}")
    if r == int(r) and abs(r) < 2**53:
        return int(r) if r != 0 else 0
    return r


def to_jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return [_float(obj.real), _float(obj.imag)]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()] if obj.dtype != object else [to_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), separators=(",", ":"), allow_nan=False)


def parse_number(x, exact: bool = True):
    """Ints and "p/q" strings become Fractions; floats stay floats unless ``exact``."""
    if isinstance(x, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(x, float) and not exact:
        return x
    if isinstance(x, str) and not exact:
        return float(Fraction(x))
    return to_fraction(x)


def parse_numbers(text_or_list, exact: bool = True) -> list:
    if isinstance(text_or_list, str):
        text_or_list = [t for t in text_or_list.split(",") if t.strip()]
    return [parse_number(t.strip() if isinstance(t, str) else t, exact) for t in text_or_list]


def any_float(values) -> bool:
    if isinstance(values, dict):
        return any(any_float(v) for v in values.values())
    if isinstance(values, (list, tuple)):
        return any(any_float(v) for v in values)
    if isinstance(values, str):
        return "." in values or "e" in values.lower()
    return isinstance(values, float)


def _complex(entry) -> complex:
    if isinstance(entry, (list, tuple)):
        if len(entry) != 2:
            raise ValueError("complex entries must be [re, im] pairs")
        return complex(float(Fraction(str(entry[0]))), float(Fraction(str(entry[1]))))
    return complex(float(Fraction(str(entry))), 0.0)


def parse_complex_matrix(rows) -> np.ndarray:
    out = np.array([[_complex(e) for e in row] for row in rows], dtype=np.complex128)
    if out.ndim != 2:
        raise ValueError("matrix must be a list of equal-length rows")
    return out


def parse_complex_vector(entries) -> np.ndarray:
    return np.array([_complex(e) for e in entries], dtype=np.complex128)


def parse_mask(x) -> int:
    """Bitmask from an int, a "0b..." string or a list of member indices."""
    if isinstance(x, bool):
        raise ValueError("booleans are not masks")
    if isinstance(x, int):
        if x < 0:
            raise ValueError("masks are nonnegative")
        return x
    if isinstance(x, str):
        return int(x, 0)
    if isinstance(x, (list, tuple)):
        mask = 0
        for i in x:
            mask |= 1 << int(i)
        return mask
    raise ValueError(f"cannot read a mask from {x!r}")
