"""Stability laboratory for the thermoelastic plate-membrane transmission
system: spectral collocation per angular mode, energy-metric reduction,
symbol-level ellipticity checks, and semigroup decay experiments."""

try:
    from ._pmstab import *  # noqa: F401,F403  (installed package layout)
    from . import _pmstab as _core
except ImportError:  # in-tree builds put the module on PYTHONPATH
    from _pmstab import *  # noqa: F401,F403
    import _pmstab as _core

__all__ = [name for name in dir(_core) if not name.startswith("_")]
__version__ = "0.1.0"
