"""Hot counting kernels for c-DDT sweeps.

Two interchangeable backends compute the same q x q count grid: a compiled
Cython core (built optionally, see setup.py) and a vectorised numpy
fallback.  The backend is picked at import time and can be forced with the
CDU_BACKEND environment variable ("compiled", "numpy" or "auto").
"""

from __future__ import annotations

import os

import numpy as np

from .field import Felt, Field

try:
    from . import _ddtcore  # compiled extension, optional
except ImportError:
    _ddtcore = None

HAVE_COMPILED = _ddtcore is not None

_FORCED = os.environ.get("CDU_BACKEND", "auto").strip().lower()
if _FORCED not in ("auto", "compiled", "numpy"):
    raise ValueError(f"CDU_BACKEND must be auto, compiled or numpy, not {_FORCED!r}")
if _FORCED == "compiled" and not HAVE_COMPILED:
    raise ImportError("CDU_BACKEND=compiled but the cdu._ddtcore extension is not built")

_backend = "compiled" if (HAVE_COMPILED and _FORCED != "numpy") else "numpy"


def active_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    """Force a backend at runtime (used by tests and the benchmark)."""
    global _backend
    if name not in ("compiled", "numpy"):
        raise ValueError(name)
    if name == "compiled" and not HAVE_COMPILED:
        raise RuntimeError("compiled kernel not available")
    _backend = name


def _neg_mul_c(K: Field, F: np.ndarray, c: Felt) -> np.ndarray:
    """Vector of -c*F(x) over all x."""
    return K.neg_vector()[K.vmul_const(c, F)]


def ddt_counts(K: Field, F, c: Felt, backend: str | None = None) -> np.ndarray:
    """counts[a][b] = #{x : F(x+a) - c F(x) = b}, one pass over (a, x)."""
    Fv = np.ascontiguousarray(np.asarray(F, dtype=np.int64))
    if Fv.shape != (K.q,):
        raise ValueError(f"function table must have length q = {K.q}")
    which = backend or _backend
    if which == "compiled":
        return _counts_compiled(K, Fv, c)
    return _counts_numpy(K, Fv, c)


def _counts_numpy(K: Field, Fv: np.ndarray, c: Felt) -> np.ndarray:
    from .field import DENSE_TABLE_LIMIT

    q = K.q
    negmc = _neg_mul_c(K, Fv, c)
    if q <= DENSE_TABLE_LIMIT:
        add = K.add_table()
        vals = add[Fv[add], negmc[:, None]]  # vals[x, a] = F(x+a) - c F(x)
        flat = vals + q * np.arange(q, dtype=np.int64)[None, :]
        return np.bincount(flat.ravel(), minlength=q * q).reshape(q, q)
    xs = np.arange(q, dtype=np.int64)
    out = np.empty((q, q), dtype=np.int64)
    for a in range(q):
        vals = K.vadd_arrays(Fv[K.vadd(xs, a)], negmc)
        out[a] = np.bincount(vals, minlength=q)
    return out


def _counts_compiled(K: Field, Fv: np.ndarray, c: Felt) -> np.ndarray:
    q = K.q
    out = np.zeros((q, q), dtype=np.int64)
    negmc = np.ascontiguousarray(_neg_mul_c(K, Fv, c))
    if K.p == 2:
        _ddtcore.ddt_counts_xor(Fv, negmc, out)
    else:
        addtab = np.ascontiguousarray(K.add_table(), dtype=np.int64)
        _ddtcore.ddt_counts_tab(Fv, addtab, negmc, out)
    return out
