"""Budget configuration.

Defaults can be overridden through the ``SOLVRANK_BUDGET`` environment
variable, a comma separated list of ``name=value`` pairs, e.g.
``SOLVRANK_BUDGET="enumeration=200000,orbit=59049"``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace


class BudgetExceeded(RuntimeError):
    """Raised when a computation would exceed a configured budget."""

    def __init__(self, what: str, needed: int, limit: int):
        super().__init__(f"{what}: needs {needed}, budget is {limit}")
        self.what = what
        self.needed = needed
        self.limit = limit


@dataclass(frozen=True)
class Budgets:
    enumeration: int = 100_000     # elements materialised by brute enumeration
    orbit: int = 3**10             # points of V handled by orbit computations
    brute: int = 40_000_000        # |GL| scanned by brute-force normalizers
    subgroups: int = 10_000        # order of quotient for subgroup enumeration

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"budget {f.name} must be positive")


def parse_budget_string(text: str, base: Budgets | None = None) -> Budgets:
    base = base or Budgets()
    if not text.strip():
        return base
    names = {f.name for f in fields(Budgets)}
    updates = {}
    for item in text.split(","):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in names:
            raise ValueError(f"bad budget entry {item!r}")
        updates[key] = int(float(value))
    return replace(base, **updates)


_current: Budgets | None = None


def budgets() -> Budgets:
    global _current
    if _current is None:
        _current = parse_budget_string(os.environ.get("SOLVRANK_BUDGET", ""))
    return _current


def set_budgets(b: Budgets | None) -> None:
    """Install budgets for this process (None re-reads the environment)."""
    global _current
    _current = b
