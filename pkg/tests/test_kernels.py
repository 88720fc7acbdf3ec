import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ctx
from lsb2adic import _kernels
from lsb2adic.gf import mul_matrix, trace_vector

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not importable")


def kernel_args(c):
    return mul_matrix(c, c.alpha), trace_vector(c), c.p, c.N


@pytest.mark.parametrize("p,n", [(3, 1), (3, 5), (5, 4), (7, 3), (13, 2), (31, 2), (313, 2)])
def test_numpy_mseq_matches_plain_loop(p, n):
    c = ctx(p, n)
    mult, trvec, _, N = kernel_args(c)
    v = np.zeros(n, dtype=np.int64)
    v[0] = 1
    want = []
    for _ in range(N):
        want.append(int(trvec @ v) % p)
        v = (mult @ v) % p
    assert _kernels.mseq_numpy(mult, trvec, p, N).tolist() == want


@needs_numba
@pytest.mark.parametrize("p,n", [(3, 6), (5, 4), (7, 4), (17, 2), (313, 2)])
def test_mseq_backends_agree(p, n):
    args = kernel_args(ctx(p, n))
    a = _kernels.mseq_numba(*args)
    b = _kernels.mseq_numpy(*args)
    assert a.dtype == b.dtype == np.uint16
    assert np.array_equal(a, b)


@needs_numba
@given(st.lists(st.integers(0, 1), min_size=1, max_size=300))
def test_ac_backends_agree(bits):
    bits = np.array(bits, dtype=np.uint8)
    assert np.array_equal(_kernels.ac_profile_numba(bits), _kernels.ac_profile_numpy(bits))


def test_dispatch_matches_backend():
    want = _kernels.mseq_numba if _kernels.HAVE_NUMBA else _kernels.mseq_numpy
    assert _kernels.mseq_values is want
    assert _kernels.BACKEND == ("numba" if _kernels.HAVE_NUMBA else "numpy")


@pytest.mark.parametrize("flag,expected", [("1", "numpy"), ("true", "numpy")])
def test_env_flag_selects_numpy(flag, expected):
    env = dict(os.environ, LSB2ADIC_DISABLE_NUMBA=flag)
    code = ("from lsb2adic import _kernels, lsb_of, field_for; "
            "s = lsb_of(field_for(7, 2)); print(_kernels.BACKEND, s.weight)")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.split()
    assert out == [expected, "27"]
