import hashlib
import inspect
import os
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Tuple, Union

import orjson

from .errors import InvalidInput

Rational = Union[int, Fraction]


def relp(rel_path: Union[str, Path], parents=0, return_str=True, strict=False):
    currentframe = inspect.currentframe()
    f = currentframe.f_back
    for _ in range(parents):
        f = f.f_back
    current_path = Path(f.f_code.co_filename).parent
    pathlib_path = current_path / rel_path
    pathlib_path = pathlib_path.resolve(strict=strict)
    if return_str:
        return str(pathlib_path)
    else:
        return pathlib_path


def parse_rational(value: Any) -> Fraction:
    """
    Parses an exact rational from an int, a Fraction or a "p/q" string.

    Floats are accepted only when they hold an integer value.
    """
    if isinstance(value, bool):
        raise InvalidInput(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        if value.is_integer():
            return Fraction(int(value))
        raise InvalidInput(f"floats are not exact, pass {value!r} as a 'p/q' string")
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidInput(f"not a rational: {value!r}") from e
    raise InvalidInput(f"not a rational: {value!r}")


def format_rational(value: Rational) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _orjson_default(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, tuple):
        return list(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def json_dumps(data: Any, indent_2=True) -> bytes:
    option = orjson.OPT_SORT_KEYS | orjson.OPT_NON_STR_KEYS
    if indent_2:
        option |= orjson.OPT_INDENT_2
    return orjson.dumps(data, default=_orjson_default, option=option)


def json_loads(data: Union[str, bytes]) -> Any:
    try:
        return orjson.loads(data)
    except orjson.JSONDecodeError as e:
        raise InvalidInput(f"malformed JSON: {e}") from e


def json_load(filepath: str, rel=False, mode="rb"):
    abs_path = relp(filepath, parents=1) if rel else filepath
    with open(abs_path, mode=mode) as f:
        return json_loads(f.read())


def load_json_arg(value: Any) -> Any:
    """
    Resolves a CLI argument that may be a Python object, inline JSON or a path.
    """
    if not isinstance(value, str):
        return value
    text = value.strip()
    if text.startswith(("[", "{")):
        return json_loads(text)
    path = Path(text)
    if path.exists():
        return json_load(str(path))
    raise InvalidInput(f"neither inline JSON nor an existing file: {value!r}")


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def env2bool(env_name: str, default=False) -> bool:
    return os.environ.get(env_name, str(default)).strip().lower() == "true"


def env2int(env_name: str, default: int) -> int:
    return int(os.environ.get(env_name, "").strip() or default)


def grade_key(grade: Iterable[int]) -> Tuple[int, Tuple[int, ...]]:
    """Sort key for grades: height first, then lexicographic."""
    grade = tuple(grade)
    return sum(grade), grade
