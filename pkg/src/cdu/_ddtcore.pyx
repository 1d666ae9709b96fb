# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled counting kernels behind cdu.kernels.

Same contracts as the numpy fallback: fill out[a][b] with the number of x
satisfying F(x+a) - c F(x) = b, given F and the per-x vector -c*F(x).
"""


def ddt_counts_xor(const long long[::1] F, const long long[::1] negmc,
                   long long[:, ::1] out):
    """Characteristic 2: field addition is XOR, no add table needed."""
    cdef Py_ssize_t q = F.shape[0]
    cdef Py_ssize_t a, x
    cdef Py_ssize_t v
    with nogil:
        for a in range(q):
            for x in range(q):
                v = <Py_ssize_t> (F[x ^ a] ^ negmc[x])
                out[a, v] += 1


def ddt_counts_tab(const long long[::1] F, const long long[:, ::1] addtab,
                   const long long[::1] negmc, long long[:, ::1] out):
    """Odd characteristic: addition through the precomputed q x q table."""
    cdef Py_ssize_t q = F.shape[0]
    cdef Py_ssize_t a, x
    cdef Py_ssize_t v
    with nogil:
        for a in range(q):
            for x in range(q):
                v = <Py_ssize_t> addtab[<Py_ssize_t> F[addtab[x, a]], <Py_ssize_t> negmc[x]]
                out[a, v] += 1
