"""Enumeration budgets; AUTOEXP_BUDGET overrides the default."""

import os

DEFAULT_BUDGET = 10 ** 8


class BudgetError(RuntimeError):
    """An enumeration would exceed the configured resource budget."""


def enumeration_budget() -> int:
    raw = os.environ.get("AUTOEXP_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    value = int(raw)
    if value < 1:
        raise ValueError("AUTOEXP_BUDGET must be a positive integer")
    return value
