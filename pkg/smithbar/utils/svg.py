"""
SVG rendering of barcodes through a Jinja2 template.

Bars are grouped by degree with one horizontal track per bar; integer grid
lines are drawn across the window and infinite bars run to the right edge
without a closing end.
"""

import math
import os
from fractions import Fraction
from typing import List, Optional, Tuple

from jinja2 import Environment, FileSystemLoader, select_autoescape

from ..core.errors import InputError
from .formatters import format_bound, format_rational
from .logger import get_logger

logger = get_logger(__name__)

WIDTH = 640
MARGIN_LEFT = 40
MARGIN_RIGHT = 16
MARGIN_TOP = 16
TRACK = 14
BAR_HEIGHT = 8
GROUP_GAP = 12

_env: Optional[Environment] = None


def get_environment() -> Environment:
    """Jinja2 environment over the package templates, with the number filters registered."""
    global _env
    if _env is None:
        package_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
        _env = Environment(
            loader=FileSystemLoader(os.path.join(package_dir, "templates")),
            autoescape=select_autoescape(['svg', 'j2']),
            keep_trailing_newline=True,
        )
        _env.filters["rational"] = format_rational
        _env.filters["bound"] = format_bound
    return _env


def _default_window(bars) -> Tuple[Fraction, Fraction]:
    finite = [x for b in bars for x in b.endpoints()]
    if not finite:
        return Fraction(0), Fraction(1)
    lo = math.floor(min(finite))
    hi = math.ceil(max(finite)) + 1
    return Fraction(lo), Fraction(hi)


def render_barcode_svg(barcode, window: Optional[Tuple[Fraction, Fraction]] = None,
                       title: str = "barcode") -> str:
    """SVG document with one element per unit bar meeting ``window``."""
    bars = barcode.expanded()
    lo, hi = window or _default_window(bars)
    if not lo < hi:
        raise InputError(f"empty drawing window [{lo}, {hi}]")
    visible = [b for b in bars if b.birth < hi and b.death > lo]
    span = WIDTH - MARGIN_LEFT - MARGIN_RIGHT

    def px(x) -> float:
        clipped = min(max(x, lo), hi)
        return round(MARGIN_LEFT + float((clipped - lo) / (hi - lo)) * span, 2)

    groups = []
    y = MARGIN_TOP
    for degree in sorted({b.degree for b in visible}):
        rows: List[dict] = []
        label_y = y + BAR_HEIGHT
        for bar in sorted(b for b in visible if b.degree == degree):
            x0, x1 = px(bar.birth), px(bar.death)
            rows.append({
                'birth': bar.birth,
                'death': bar.death,
                'infinite': bar.is_infinite,
                'x0': x0,
                'x1': x1,
                'w': round(x1 - x0, 2),
                'y': y,
                'y_mid': y + BAR_HEIGHT / 2,
            })
            y += TRACK
        groups.append({'degree': degree, 'bars': rows, 'label_y': label_y})
        y += GROUP_GAP

    ticks = [{'x': px(Fraction(k)), 'value': k} for k in range(math.ceil(lo), math.floor(hi) + 1)]
    height = y + 24
    logger.debug("Rendering %d bars in %d degrees", len(visible), len(groups))
    return get_environment().get_template('barcode.svg.j2').render(
        title=title,
        width=WIDTH,
        height=height,
        top=MARGIN_TOP - 4,
        bottom=y,
        ticks=ticks,
        groups=groups,
        bar_height=BAR_HEIGHT,
    )


def render_periodic_svg(pb, a: Fraction, b: Fraction, title: str = "periodic barcode") -> str:
    """Expansion of a periodic barcode over the window (a, b), drawn on [a, b]."""
    from ..periodic.barcode import expand_window
    return render_barcode_svg(expand_window(pb, a, b), (a, b), title)
