"""
Settings access for the lindkraus app.

Values live in the ``LINDKRAUS`` dict of the Django settings module; the
library modules fall back to their own defaults when Django is not configured.
"""

from typing import Any, Mapping, Optional

from django.conf import settings

from .core import DEFAULT_TOLERANCES, Tolerances

DEFAULT_ORACLE_MAX_DIM = 64


def get_setting(name: str, default: Any = None) -> Any:
    if not settings.configured:
        return default
    return getattr(settings, "LINDKRAUS", {}).get(name, default)


def oracle_max_dim() -> int:
    return int(get_setting("ORACLE_MAX_DIM", DEFAULT_ORACLE_MAX_DIM))


def tolerances(overrides: Optional[Mapping[str, float]] = None) -> Tolerances:
    """Tolerances from settings, then ``overrides`` on top."""
    configured = get_setting("TOLERANCES", {}) or {}
    return DEFAULT_TOLERANCES.with_overrides(configured).with_overrides(overrides)
