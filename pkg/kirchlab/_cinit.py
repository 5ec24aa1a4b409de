"""
Optional compiled 5-point stencil. Built lazily on first use through
``cffi``; the numpy path in :mod:`kirchlab.grid` is used whenever this
module cannot produce a handle.
"""
import os
import shlex

import numpy as np
from cffi import FFI

EXTRA_CFLAGS = os.environ.get('KIRCHLAB_CFFI_CFLAGS', '-O2')

ffi = FFI()
C = None

CDEF_INPUT = """
void kl_apply_laplacian(const double *u, const int64_t *nbr, double *out,
                        int64_t n, double inv_h2);
"""

VERIFY_INPUT = """
#include <stdint.h>

void kl_apply_laplacian(const double *u, const int64_t *nbr, double *out,
                        int64_t n, double inv_h2)
{
    int64_t i, k, j;
    for (i = 0; i < n; i++) {
        double s = 4.0 * u[i];
        for (k = 0; k < 4; k++) {
            j = nbr[4 * i + k];
            if (j >= 0) {
                s -= u[j];
            }
        }
        out[i] = s * inv_h2;
    }
}
"""


def get_handle():
    global C
    if C:
        return C

    ffi.cdef(CDEF_INPUT)
    C = ffi.verify(VERIFY_INPUT,
                   extra_compile_args=shlex.split(EXTRA_CFLAGS))
    return C


def apply_laplacian_c(handle, nbr, vals, inv_h2):
    """
    :param handle: Library returned by :func:`get_handle`
    :param nbr: ``(N, 4)`` int64 neighbor table, ``-1`` for boundary
    :param vals: Interior values
    :param inv_h2: ``1 / h^2``
    :return: A new array holding ``-Delta_h vals``
    """
    u = np.ascontiguousarray(vals, dtype=np.float64)
    nb = np.ascontiguousarray(nbr, dtype=np.int64)
    out = np.empty_like(u)
    handle.kl_apply_laplacian(
        ffi.cast('const double *', ffi.from_buffer(u)),
        ffi.cast('const int64_t *', ffi.from_buffer(nb)),
        ffi.cast('double *', ffi.from_buffer(out)),
        u.size, inv_h2)
    return out
