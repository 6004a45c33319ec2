"""Fit reports: the uniform result record for every fitted-constant check.

A "fitted constant" is the extremal constant making an existential
inequality hold on a finite verification grid (max of pointwise ratios for
an upper bound, min for a lower bound).  Every check in this package
returns one of these records instead of a bare bool so the CLI can emit a
uniform JSON summary.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

__all__ = ["FitReport"]


@dataclass(frozen=True)
class FitReport:
    """Outcome of fitting constants to one inequality on one grid.

    worst_residual is signed slack at the tightest grid point, oriented so
    that >= 0 means the inequality holds there (bound minus value for upper
    bounds, value minus floor for lower bounds).
    """

    name: str
    constants: Mapping[str, float] = field(default_factory=dict)
    worst_residual: float = 0.0
    passed: bool = False
    grid: str = ""
    notes: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "constants": dict(self.constants),
            "worst_residual": self.worst_residual,
            "passed": self.passed,
            "grid": self.grid,
            "notes": self.notes,
        }

    def __str__(self) -> str:  # compact one-liner for CLI/demo output
        consts = ", ".join(f"{k}={v:.6g}" for k, v in self.constants.items())
        status = "pass" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {consts} (worst residual {self.worst_residual:.3e})"
