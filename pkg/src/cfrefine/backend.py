"""Kernel backend selection.

The tree's inner loops exist twice: compiled (``cfrefine._cfcore``, built
from Cython) and pure Python (``cfrefine._kernels_py``).  The compiled
module is preferred when importable; ``CFREFINE_BACKEND=python`` or
``=compiled`` in the environment forces the choice.  Every tree also
accepts an explicit kernels module, which is how the benchmark pits the
two against each other in one process.
"""

import os

from . import _kernels_py
from .errors import UsageError

try:
    from . import _cfcore
except ImportError:
    _cfcore = None

HAVE_COMPILED = _cfcore is not None

_BACKENDS = {"python": _kernels_py}
if HAVE_COMPILED:
    _BACKENDS["compiled"] = _cfcore


def available_backends():
    """Names of the kernel backends importable in this environment."""
    return sorted(_BACKENDS)


def get_kernels(name=None):
    """Resolve a kernels module by name, env var, or availability."""
    if name is None:
        name = os.environ.get("CFREFINE_BACKEND")
    if name is None:
        name = "compiled" if HAVE_COMPILED else "python"
    try:
        return _BACKENDS[name]
    except KeyError:
        raise UsageError(
            f"unknown kernel backend {name!r}; available: {', '.join(available_backends())}"
        ) from None


def default_backend_name():
    """Name of the backend ``get_kernels()`` would return."""
    return get_kernels().NAME
