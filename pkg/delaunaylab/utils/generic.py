"""Generic utilities."""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, List, TypeVar

from loguru import logger

T = TypeVar('T')

TWO_PI = 2 * math.pi
PHASE_TIE_TOLERANCE = 1e-12


class InterceptHandler(logging.Handler):
    def emit(self, record):
        # Get corresponding Loguru level if it exists
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        # Find caller from where originated the logged message
        frame, depth = logging.currentframe(), 2
        while frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back
            depth += 1

        logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def map_in_order(func: Callable[[Any], T], items: Iterable[Any], workers: int = 1) -> List[T]:
    """Evaluate ``func`` on every item, in threads when ``workers > 1``, keeping input order."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))


def wrap_phase(phase: float) -> float:
    """Reduce a phase to (-pi, pi]."""
    wrapped = math.remainder(phase, TWO_PI)
    if abs(wrapped + math.pi) <= PHASE_TIE_TOLERANCE:
        return math.pi
    return wrapped


def fold_phase(phase: float) -> float:
    """Fold a quasiperiodicity phase into [0, pi] using lambda(-alpha) = lambda(alpha).

    Phases within rounding of an odd multiple of pi map to pi exactly.
    """
    folded = abs(wrap_phase(phase))
    if abs(folded - math.pi) <= PHASE_TIE_TOLERANCE:
        return math.pi
    return folded


def format_number(value: float) -> str:
    return f'{value:.15g}'
