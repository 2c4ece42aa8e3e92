"""
Core modules for bhq.
"""

from .config import Config
from .errors import BhqError, InputError, ResourceError, TreeSyntaxError, VerificationFailure

__all__ = ["Config", "BhqError", "InputError", "ResourceError", "TreeSyntaxError", "VerificationFailure"]
