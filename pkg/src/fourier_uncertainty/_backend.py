"""Selects the compiled kernel module when it is importable, else the numpy fallback."""
from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_active = _ckernels if _ckernels is not None else _pykernels


def available():
    return [m.NAME for m in (_ckernels, _pykernels) if m is not None]


def name():
    return _active.NAME


def use(backend_name):
    """Switch the active backend ("cython" or "python")."""
    global _active
    for mod in (_ckernels, _pykernels):
        if mod is not None and mod.NAME == backend_name:
            _active = mod
            return
    raise ValueError(f"backend {backend_name!r} not available; have {available()}")


def power_cos_integral(p, omega, a, b, tol, max_depth):
    return _active.power_cos_integral(p, omega, a, b, tol, max_depth)


def xpow_cos_integral(q, omega, a, b, tol, max_depth):
    return _active.xpow_cos_integral(q, omega, a, b, tol, max_depth)


def xpow_sin_integral(q, omega, a, b, tol, max_depth):
    return _active.xpow_sin_integral(q, omega, a, b, tol, max_depth)


def hyp1f2_series(a, b1, b2, x, max_terms):
    return _active.hyp1f2_series(a, b1, b2, x, max_terms)
