"""Hot kernels for triple scans.

Every kernel exists twice: a numba ``@njit`` version and a vectorised numpy
version. The numba path is used when numba imports and ``INDEPKIT_NO_NUMBA``
is unset (or ``0``). Both paths take the same arrays and must return
identical results; ``tests/test_accel.py`` cross-checks them.

Input layout (shared by all kernels)
------------------------------------
``ids`` is an ``(2**n, m)`` int array. Row ``S`` holds, for each member of
the function set, an integer identifying the member's fragment on the
attribute subset with bitmask ``S``. Equal ids mean equal fragments. All ids
are ``< bound``.

``xm, ym, zm`` are parallel arrays of attribute bitmasks, one entry per
triple to evaluate.
"""

import os

import numpy as np

_FLAG = "INDEPKIT_NO_NUMBA"


def _numba_requested():
    return os.environ.get(_FLAG, "0").strip().lower() in ("", "0", "false", "no")


try:  # pragma: no cover - exercised implicitly by whichever path is active
    if not _numba_requested():
        raise ImportError("numba disabled by " + _FLAG)
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

# Chunk size for the vectorised numpy path: triples * members per chunk.
_NUMPY_CHUNK_ELEMS = 1 << 21


def backend():
    return "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# set independence scan


def _scan_set_numpy(ids, bound, xm, ym, zm):
    T = len(xm)
    out = np.ones(T, dtype=bool)
    m = ids.shape[1]
    if m == 0 or T == 0:
        return out
    step = max(1, _NUMPY_CHUNK_ELEMS // max(m, bound))
    for lo in range(0, T, step):
        hi = min(T, lo + step)
        x, y, z = xm[lo:hi], ym[lo:hi], zm[lo:hi]
        nt = hi - lo
        offset = (np.arange(nt, dtype=np.int64) * bound)[:, None]
        idy = ids[y].astype(np.int64) + offset

        def per_y(a):
            # count distinct values of a per row, attributed to their y-class
            a = a.astype(np.int64) + offset
            order = np.argsort(a, axis=1, kind="stable")
            s = np.take_along_axis(a, order, axis=1)
            first = np.ones(s.shape, dtype=bool)
            first[:, 1:] = s[:, 1:] != s[:, :-1]
            ys = np.take_along_axis(idy, order, axis=1)[first]
            return np.bincount(ys, minlength=nt * bound).reshape(nt, bound)

        cx = per_y(ids[x | y])
        cz = per_y(ids[z | y])
        cxz = per_y(ids[x | y | z])
        out[lo:hi] = (cxz == cx * cz).all(axis=1)
    trivial = (xm == 0) | (zm == 0)
    out[trivial] = True
    return out


def _prob_scan_numpy(ids, bound, weights, xm, ym, zm):
    """Integer-weight probabilistic scan; weights must keep products < 2**62."""
    T = len(xm)
    out = np.ones(T, dtype=bool)
    m = ids.shape[1]
    if m == 0 or T == 0:
        return out
    w = weights.astype(np.float64)
    step = max(1, _NUMPY_CHUNK_ELEMS // max(m, bound))
    for lo in range(0, T, step):
        hi = min(T, lo + step)
        x, y, z = xm[lo:hi], ym[lo:hi], zm[lo:hi]
        nt = hi - lo
        offset = (np.arange(nt, dtype=np.int64) * bound)[:, None]
        wide = np.broadcast_to(w, (nt, m)).ravel()

        def sums(sub):
            key = (ids[sub].astype(np.int64) + offset).ravel()
            tot = np.bincount(key, weights=wide, minlength=nt * bound)
            # integer sums below 2**53 are exact in float64
            return np.rint(tot).astype(np.int64)[key].reshape(nt, m)

        lhs = sums(x | y | z) * sums(y)
        rhs = sums(x | y) * sums(z | y)
        out[lo:hi] = (lhs == rhs).all(axis=1)
    trivial = (xm == 0) | (zm == 0)
    out[trivial] = True
    return out


if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _scan_set_numba(ids, bound, xm, ym, zm):  # pragma: no cover - jitted
        T = xm.shape[0]
        m = ids.shape[1]
        out = np.ones(T, dtype=np.bool_)
        seen_xy = np.zeros(bound, dtype=np.bool_)
        seen_zy = np.zeros(bound, dtype=np.bool_)
        seen_xyz = np.zeros(bound, dtype=np.bool_)
        cx = np.zeros(bound, dtype=np.int64)
        cz = np.zeros(bound, dtype=np.int64)
        cxz = np.zeros(bound, dtype=np.int64)
        for t in range(T):
            x = xm[t]
            y = ym[t]
            z = zm[t]
            if x == 0 or z == 0:
                continue
            iy = ids[y]
            ixy = ids[x | y]
            izy = ids[z | y]
            ixyz = ids[x | y | z]
            for r in range(m):
                k = ixy[r]
                if not seen_xy[k]:
                    seen_xy[k] = True
                    cx[iy[r]] += 1
                k = izy[r]
                if not seen_zy[k]:
                    seen_zy[k] = True
                    cz[iy[r]] += 1
                k = ixyz[r]
                if not seen_xyz[k]:
                    seen_xyz[k] = True
                    cxz[iy[r]] += 1
            ok = True
            for r in range(m):
                g = iy[r]
                if cxz[g] != cx[g] * cz[g]:
                    ok = False
                    break
            out[t] = ok
            for r in range(m):
                seen_xy[ixy[r]] = False
                seen_zy[izy[r]] = False
                seen_xyz[ixyz[r]] = False
                g = iy[r]
                cx[g] = 0
                cz[g] = 0
                cxz[g] = 0
        return out

    @njit(cache=True, nogil=True)
    def _prob_scan_numba(ids, bound, weights, xm, ym, zm):  # pragma: no cover
        T = xm.shape[0]
        m = ids.shape[1]
        out = np.ones(T, dtype=np.bool_)
        wy = np.zeros(bound, dtype=np.int64)
        wxy = np.zeros(bound, dtype=np.int64)
        wzy = np.zeros(bound, dtype=np.int64)
        wxyz = np.zeros(bound, dtype=np.int64)
        for t in range(T):
            x = xm[t]
            y = ym[t]
            z = zm[t]
            if x == 0 or z == 0:
                continue
            iy = ids[y]
            ixy = ids[x | y]
            izy = ids[z | y]
            ixyz = ids[x | y | z]
            for r in range(m):
                w = weights[r]
                wy[iy[r]] += w
                wxy[ixy[r]] += w
                wzy[izy[r]] += w
                wxyz[ixyz[r]] += w
            ok = True
            for r in range(m):
                if wxyz[ixyz[r]] * wy[iy[r]] != wxy[ixy[r]] * wzy[izy[r]]:
                    ok = False
                    break
            out[t] = ok
            for r in range(m):
                wy[iy[r]] = 0
                wxy[ixy[r]] = 0
                wzy[izy[r]] = 0
                wxyz[ixyz[r]] = 0
        return out


def scan_set(ids, bound, xm, ym, zm, force=None):
    """Evaluate set independence for each triple ``(xm[t], ym[t], zm[t])``.

    ``force`` selects ``"numba"`` or ``"numpy"`` explicitly (benchmarks and
    cross-checks); ``None`` uses the active backend.
    """
    ids = np.ascontiguousarray(ids)
    xm = np.ascontiguousarray(xm, dtype=np.int64)
    ym = np.ascontiguousarray(ym, dtype=np.int64)
    zm = np.ascontiguousarray(zm, dtype=np.int64)
    use = force or backend()
    if use == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend unavailable")
        return _scan_set_numba(ids, int(bound), xm, ym, zm)
    return _scan_set_numpy(ids, int(bound), xm, ym, zm)


def scan_prob(ids, bound, weights, xm, ym, zm, force=None):
    """Probabilistic independence for each triple, integer weights per member.

    Members must carry strictly positive weights. Callers guarantee
    ``sum(weights)**2 < 2**62`` so every product fits in int64.
    """
    ids = np.ascontiguousarray(ids)
    weights = np.ascontiguousarray(weights, dtype=np.int64)
    xm = np.ascontiguousarray(xm, dtype=np.int64)
    ym = np.ascontiguousarray(ym, dtype=np.int64)
    zm = np.ascontiguousarray(zm, dtype=np.int64)
    use = force or backend()
    if use == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend unavailable")
        return _prob_scan_numba(ids, int(bound), weights, xm, ym, zm)
    return _prob_scan_numpy(ids, int(bound), weights, xm, ym, zm)
