"""Optional numba compilation for the scalar hot paths.

Every kernel decorated with ``scalar_jit`` is plain Python using only the
``math`` module and floats, so the package works (slower) when numba is
unavailable. IEEE semantics are preserved (``fastmath`` stays off) so the
compiled and interpreted paths produce identical doubles.
"""

try:
    from numba import njit as _njit

    HAVE_NUMBA = True

    def scalar_jit(func):
        return _njit(cache=True, fastmath=False, nogil=True)(func)

except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def scalar_jit(func):
        return func
