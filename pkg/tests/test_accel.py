import importlib.util
import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest
from conftest import cube

from indepkit import _accel
from indepkit.funcset import AttributeSet, FunctionSet
from indepkit.independence import RationalMeasure
from indepkit.triples import decode_all

needs_numba = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba unavailable")


def _random_sets(rng, count, alphabet=(0, 1)):
    for _ in range(count):
        n = int(rng.integers(1, 7))
        attrs = AttributeSet(tuple("abcdef"[:n]))
        k = len(alphabet)
        m = int(rng.integers(2, min(k**n, 24) + 1))
        codes = rng.choice(k**n, size=m, replace=False)
        rows = [[alphabet[(c // k**i) % k] for i in range(n)] for c in codes]
        yield FunctionSet(attrs, rows, alphabet)


@needs_numba
def test_set_kernels_agree(rng):
    for s in _random_sets(rng, 40, (0, 1, 2)):
        ids, bound = s.id_table
        xm, ym, zm = decode_all(len(s.attrs))
        a = _accel.scan_set(ids, bound, xm, ym, zm, force="numba")
        b = _accel.scan_set(ids, bound, xm, ym, zm, force="numpy")
        assert (a == b).all()


@needs_numba
def test_prob_kernels_agree(rng):
    for s in _random_sets(rng, 40):
        w = rng.integers(1, 9, size=len(s))
        p = RationalMeasure(s, tuple(Fraction(int(v), int(w.sum())) for v in w))
        ints, _ = p.integer_weights()
        ids, bound = p.support.id_table
        xm, ym, zm = decode_all(len(s.attrs))
        ints = np.asarray(ints, dtype=np.int64)
        a = _accel.scan_prob(ids, bound, ints, xm, ym, zm, force="numba")
        b = _accel.scan_prob(ids, bound, ints, xm, ym, zm, force="numpy")
        assert (a == b).all()


def test_numpy_chunking_boundary(monkeypatch):
    s = FunctionSet(AttributeSet.of("abcde"), cube(5)[::3], (0, 1))
    ids, bound = s.id_table
    xm, ym, zm = decode_all(5)
    whole = _accel.scan_set(ids, bound, xm, ym, zm, force="numpy")
    monkeypatch.setattr(_accel, "_NUMPY_CHUNK_ELEMS", 7)
    assert (_accel.scan_set(ids, bound, xm, ym, zm, force="numpy") == whole).all()


def test_env_flag_selects_numpy():
    code = "from indepkit import _accel, scan_table; from indepkit.funcset import FunctionSet; print(_accel.backend(), int(scan_table(FunctionSet.from_strings('xyz', ['000', '111'])).sum()))"
    env = dict(os.environ, INDEPKIT_NO_NUMBA="1")
    off = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout.split()
    assert off[0] == "numpy"
    env.pop("INDEPKIT_NO_NUMBA")
    on = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout.split()
    assert on[1] == off[1]
    assert on[0] == ("numba" if importlib.util.find_spec("numba") else "numpy")
