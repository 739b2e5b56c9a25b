# cython: language_level=3
"""Compiled structure-function kernel.

Same op semantics as ``_kernel_py`` (which stays the reference), limited
to 64 component slots so alive states fit one machine word. The exact
enumerator walks all 2^n component states with Kahan accumulation.
"""

from libc.stdlib cimport free, malloc

cdef int K_START = 0
cdef int K_MEMBER = 1
cdef int K_AND = 2
cdef int K_OR_K = 3


cdef inline int _eval(const signed char* op_kind, const int* op_k, const int* op_comp,
                      const int* op_in_ptr, const int* op_inputs,
                      int n_ops, unsigned long long alive, int sink_op,
                      unsigned char* values) nogil:
    cdef int i, j, lo, hi, need, v, kind
    for i in range(n_ops):
        kind = op_kind[i]
        lo = op_in_ptr[i]
        hi = op_in_ptr[i + 1]
        if kind == K_START:
            v = 1
        elif kind == K_MEMBER:
            v = <int>((alive >> op_comp[i]) & 1)
            if v:
                for j in range(lo, hi):
                    if not values[op_inputs[j]]:
                        v = 0
                        break
        elif kind == K_AND:
            v = 1
            for j in range(lo, hi):
                if not values[op_inputs[j]]:
                    v = 0
                    break
        else:
            need = op_k[i]
            v = 0
            for j in range(lo, hi):
                need -= values[op_inputs[j]]
                if need <= 0:
                    v = 1
                    break
        values[i] = <unsigned char>v
    return values[sink_op]


def evaluate(const signed char[:] op_kind, const int[:] op_k, const int[:] op_comp,
             const int[:] op_in_ptr, const int[:] op_inputs,
             alive_mask, int sink_op):
    cdef int n_ops = op_kind.shape[0]
    cdef unsigned long long alive = <unsigned long long>alive_mask
    cdef unsigned char* values = <unsigned char*>malloc(n_ops)
    if values == NULL:
        raise MemoryError()
    try:
        return bool(_eval(&op_kind[0], &op_k[0], &op_comp[0], &op_in_ptr[0],
                          &op_inputs[0], n_ops, alive, sink_op, values))
    finally:
        free(values)


def exact_reliability(const signed char[:] op_kind, const int[:] op_k, const int[:] op_comp,
                      const int[:] op_in_ptr, const int[:] op_inputs,
                      int sink_op, const int[:] failable_slots, const double[:] probs,
                      base_alive_mask):
    cdef int n_ops = op_kind.shape[0]
    cdef int n = failable_slots.shape[0]
    cdef unsigned long long base = <unsigned long long>base_alive_mask
    cdef unsigned long long state, alive, bit
    cdef int i
    cdef double p, total = 0.0, carry = 0.0, y, t

    for i in range(n):
        base &= ~(<unsigned long long>1 << failable_slots[i])

    cdef unsigned char* values = <unsigned char*>malloc(n_ops)
    if values == NULL:
        raise MemoryError()
    try:
        with nogil:
            for state in range(<unsigned long long>1 << n):
                alive = base
                p = 1.0
                for i in range(n):
                    if (state >> i) & 1:
                        alive |= <unsigned long long>1 << failable_slots[i]
                        p *= probs[i]
                    else:
                        p *= 1.0 - probs[i]
                if _eval(&op_kind[0], &op_k[0], &op_comp[0], &op_in_ptr[0],
                         &op_inputs[0], n_ops, alive, sink_op, values):
                    y = p - carry
                    t = total + y
                    carry = (t - total) - y
                    total = t
    finally:
        free(values)
    return total
