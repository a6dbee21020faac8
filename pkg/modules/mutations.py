"""
Formula Mutations
Named, deliberate corruptions of the structural formulas. Switching one on
must make at least one certificate fail; the harness uses this to guard
against checks that pass vacuously.
"""

from contextlib import contextmanager
from typing import Callable, Dict, List

MUTATIONS: Dict[str, str] = {
    't_factor_exponent': "pi exponent of the t-factor raised by one",
    'rho_squared': "cyclic rotation rho replaced by rho^2 inside h~",
    'drop_summand': "last summand of the h~ formula dropped",
    'corrupt_can': "can map sends t to pi^(m'-m) t + 1",
    'varrho_fixed_point': "varrho_c(c) = c instead of 1",
}

_active: set = set()
_cache_clearers: List[Callable[[], None]] = []


def register_cache(clear: Callable[[], None]) -> Callable[[], None]:
    """Register a cache-clearing callable run whenever the active mutations change."""
    _cache_clearers.append(clear)
    return clear


def clear_caches():
    for clear in _cache_clearers:
        clear()


def is_active(name: str) -> bool:
    return name in _active


def active() -> List[str]:
    return sorted(_active)


@contextmanager
def applied(*names: str):
    """
    Activate mutations for the duration of the block.

    Raises:
        ValueError: If a name is not a registered mutation
    """
    unknown = [n for n in names if n not in MUTATIONS]
    if unknown:
        raise ValueError(f"Unknown mutation(s): {', '.join(unknown)}")
    previous = set(_active)
    _active.update(names)
    clear_caches()
    try:
        yield
    finally:
        _active.clear()
        _active.update(previous)
        clear_caches()
