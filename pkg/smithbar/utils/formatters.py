"""
Number formatting and data file utilities for smithbar.
"""

import json
import math
import os
from datetime import timedelta
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Any, Union

import yaml

from ..core.errors import InputError

try:
    from humanize import precisedelta
except ImportError:
    # Fallback if humanize is not available
    def precisedelta(delta, minimum_unit='seconds', format='%0.2f'):
        return f"{delta.total_seconds():.2f} seconds"


Bound = Union[Fraction, float]

INFINITY = math.inf


def parse_rational(text: Any, allow_inf: bool = False) -> Bound:
    """Parse ``p/q``, an integer or a decimal exactly.

    Decimals are read as fractions over powers of ten, so ``0.1`` is 1/10.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    raw = str(text).strip()
    if raw.lower() in ('inf', '+inf', 'infinity'):
        if allow_inf:
            return INFINITY
        raise InputError(f"unbounded value not allowed here: {raw!r}")
    try:
        if '/' in raw:
            num, den = raw.split('/', 1)
            return Fraction(int(num), int(den))
        return Fraction(Decimal(raw))
    except (ValueError, ZeroDivisionError, InvalidOperation) as e:
        raise InputError(f"not a rational number: {raw!r}") from e


def format_rational(x: Fraction) -> str:
    """Format a rational as ``"p/q"`` or ``"p"``."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_bound(x: Bound) -> str:
    """Format a bar endpoint, with ``"inf"`` for an unbounded death."""
    if x == INFINITY:
        return 'inf'
    return format_rational(x)


def duration_fmt(seconds: float) -> str:
    """Humanize an elapsed time (e.g. '1.52 seconds')."""
    return precisedelta(timedelta(seconds=seconds), minimum_unit='milliseconds')


def read_yaml_file(file_path):
    """Read YAML file."""
    with open(file_path, 'r', encoding='utf-8') as file:
        data = yaml.safe_load(file)
    return data


def read_json_file(file_path):
    """Read JSON file."""
    with open(file_path, 'r', encoding='utf-8') as file:
        data = json.load(file)
    return data


def read_data_file(file_path):
    """Read a JSON or YAML document, chosen by extension."""
    if not os.path.isfile(file_path):
        raise InputError(f"file not found: {file_path}")
    ext = os.path.splitext(file_path)[1].lower()
    try:
        if ext in ('.yml', '.yaml'):
            return read_yaml_file(file_path)
        return read_json_file(file_path)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise InputError(f"cannot parse {file_path}: {e}") from e


def read_text_file(file_path):
    """Read a UTF-8 text file."""
    if not os.path.isfile(file_path):
        raise InputError(f"file not found: {file_path}")
    with open(file_path, 'r', encoding='utf-8') as file:
        return file.read()


def dump_json(data) -> str:
    """Deterministic JSON text: sorted keys, fixed indentation, final newline."""
    return json.dumps(data, sort_keys=True, indent=2) + '\n'


def write_json_file(file_path, data):
    """Write JSON file."""
    with open(file_path, 'w', encoding='utf-8') as file:
        file.write(dump_json(data))


def write_text_file(file_path, text):
    """Write a UTF-8 text file."""
    with open(file_path, 'w', encoding='utf-8') as file:
        file.write(text)
