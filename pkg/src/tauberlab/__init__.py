"""Desk-scale numerical laboratory for quantified energy decay rates.

Modules: ``weights`` (rate bounds, spectral regions, log-corrected
weights), ``atoms`` (matched bump families and their envelopes),
``contour`` (transform-inversion quadrature), ``semigroup`` (damped-wave
systems, sandwiches, cutoff identities), ``counterexamples`` (divergent
block trains and shift probes), ``cli`` (scenario runner).

Submodules load lazily so the command-line front door can cap the
linear-algebra thread pools before anything numerical is imported.
"""
from importlib import import_module

_SUBMODULES = (
    "atoms", "cli", "contour", "counterexamples", "logspace", "reports",
    "semigroup", "weights",
)

__all__ = list(_SUBMODULES)
__version__ = "0.1.0"


def __getattr__(name: str):
    if name in _SUBMODULES:
        module = import_module(f"{__name__}.{name}")
        globals()[name] = module
        return module
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(set(globals()) | set(_SUBMODULES))
