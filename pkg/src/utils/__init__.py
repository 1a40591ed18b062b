"""
Utility Functions

Shared helpers for the analyzer:
- errors.py: exception hierarchy and exit codes
- tolerances.py: the numeric tolerance bundle
- logging_setup.py: logging configuration (standard error + optional log file)
- matching.py: fuzzy "did you mean" suggestions for configuration keys
"""

from .errors import *  # noqa: F401,F403
from .errors import __all__ as _error_names
from .tolerances import Tolerances
from .logging_setup import setup_logging
from .matching import suggest_key, unknown_key_message

__all__ = list(_error_names) + [
    'Tolerances',
    'setup_logging',
    'suggest_key',
    'unknown_key_message',
]
