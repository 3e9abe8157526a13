"""
caliber-cli - calibers of real quadratic fields.

A Python CLI tool that enumerates reduced binary quadratic forms, splits
them into reduction cycles and machine-checks caliber bounds and
class-number-one lists over ranges of square-free d.

Example usage:
    # Caliber of Q(√13)
    $ caliber-cli caliber 13

    # All d <= 300 of caliber two outside 5 mod 8
    $ caliber-cli scan --from 2 --to 300 --kappa 2 --mod8 not5
"""

from .config import ConfigManager
from .engine import DomainError, InvariantViolation, caliber, scan_range, verify_suite

__all__ = [
    "ConfigManager",
    "DomainError",
    "InvariantViolation",
    "caliber",
    "scan_range",
    "verify_suite",
]
