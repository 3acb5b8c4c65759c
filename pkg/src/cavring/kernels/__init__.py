"""Integration-kernel backend selection.

The hot loop (split-step drift + cavity noise, tens of millions of
steps per ensemble) is implemented twice: a compiled Cython extension
(``cavring.kernels._core``) and a vectorized numpy fallback
(``cavring.kernels.purepy``).  The compiled kernel is preferred when it
imported successfully; set ``CAVRING_KERNEL=python`` or
``CAVRING_KERNEL=cython`` to force a choice.  Both backends implement
the identical update step and share one ``integrate_batch`` contract,
so results are interchangeable; see ``benchmarks/bench_kernels.py`` for
a speed comparison.
"""

import os

from . import purepy

try:
    from . import _core
except ImportError:
    _core = None

_requested = os.environ.get("CAVRING_KERNEL", "").strip().lower()
if _requested in ("python", "purepy", "numpy"):
    BACKEND = "python"
elif _requested == "cython":
    if _core is None:
        raise ImportError(
            "CAVRING_KERNEL=cython but the compiled kernel is not available; "
            "reinstall the package with a C compiler present"
        )
    BACKEND = "cython"
elif _requested:
    raise ImportError(f"unknown CAVRING_KERNEL value: {_requested!r}")
else:
    BACKEND = "cython" if _core is not None else "python"

integrate_batch = _core.integrate_batch if BACKEND == "cython" else purepy.integrate_batch
site_signs = purepy.site_signs


def available_backends():
    """Names of the kernel backends importable in this environment."""
    names = ["python"]
    if _core is not None:
        names.insert(0, "cython")
    return names


def backend_function(name):
    """integrate_batch implementation for an explicit backend name."""
    if name == "python":
        return purepy.integrate_batch
    if name == "cython":
        if _core is None:
            raise ImportError("compiled kernel not available")
        return _core.integrate_batch
    raise ValueError(f"unknown backend: {name!r}")
