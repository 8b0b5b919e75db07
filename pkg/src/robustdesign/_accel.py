"""Backend selection for the compiled kernels.

Set ``ROBUSTDESIGN_DISABLE_NUMBA=1`` to force the pure-numpy kernels even
when numba is installed.
"""
import os

_FALSY = {"", "0", "false", "no", "off"}

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and (
    os.environ.get("ROBUSTDESIGN_DISABLE_NUMBA", "0").strip().lower() in _FALSY
)


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, otherwise the identity decorator.

    Kernels decorated this way always exist as callables; whether the
    package *dispatches* to them is decided by ``USE_NUMBA``.
    """
    if HAVE_NUMBA:
        from numba import njit as _njit

        return _njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
