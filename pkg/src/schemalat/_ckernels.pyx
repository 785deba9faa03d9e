# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled completion kernels for binary schemata up to 64 cells.

Twins of ``schemalat._pykernels`` with identical contracts and discovery
order: an open-addressing hash set over (fixed, value) mask pairs drives the
pairwise-join sweep, so the membership test inside the inner loop is O(1)
instead of a walk over everything found so far.
"""

from libc.stdint cimport uint8_t, uint64_t
from libc.stdlib cimport calloc, free, malloc, realloc
from libc.string cimport memcpy

from .errors import BudgetExceeded

cdef extern from *:
    """
    #define SL_POPCOUNT(x) __builtin_popcountll(x)
    #define SL_CTZ(x) __builtin_ctzll(x)
    #define SL_CLZ(x) __builtin_clzll(x)
    """
    int SL_POPCOUNT(uint64_t) nogil
    int SL_CTZ(uint64_t) nogil
    int SL_CLZ(uint64_t) nogil


cdef inline uint64_t _mix(uint64_t f, uint64_t v) nogil:
    # splitmix64-style finalizer over the combined pair
    cdef uint64_t x = f ^ (v * <uint64_t>0x9E3779B97F4A7C15)
    x ^= x >> 30
    x *= <uint64_t>0xBF58476D1CE4E5B9
    x ^= x >> 27
    x *= <uint64_t>0x94D049BB133111EB
    x ^= x >> 31
    return x


cdef struct PairSet:
    uint64_t* fk
    uint64_t* vk
    uint8_t* used
    size_t mask        # capacity - 1, capacity a power of two
    size_t count
    size_t limit       # grow once count reaches this


cdef int _set_init(PairSet* s, size_t capacity) except -1:
    s.fk = <uint64_t*>malloc(capacity * sizeof(uint64_t))
    s.vk = <uint64_t*>malloc(capacity * sizeof(uint64_t))
    s.used = <uint8_t*>calloc(capacity, sizeof(uint8_t))
    if s.fk == NULL or s.vk == NULL or s.used == NULL:
        free(s.fk)
        free(s.vk)
        free(s.used)
        raise MemoryError()
    s.mask = capacity - 1
    s.count = 0
    s.limit = capacity - (capacity >> 2)  # 0.75 load factor
    return 0


cdef void _set_free(PairSet* s) noexcept:
    free(s.fk)
    free(s.vk)
    free(s.used)


cdef int _set_grow(PairSet* s) except -1:
    cdef size_t old_cap = s.mask + 1
    cdef size_t cap = old_cap * 2
    cdef uint64_t* fk = s.fk
    cdef uint64_t* vk = s.vk
    cdef uint8_t* used = s.used
    cdef size_t i, slot
    _set_init(s, cap)
    s.count = 0
    for i in range(old_cap):
        if used[i]:
            slot = _mix(fk[i], vk[i]) & s.mask
            while s.used[slot]:
                slot = (slot + 1) & s.mask
            s.used[slot] = 1
            s.fk[slot] = fk[i]
            s.vk[slot] = vk[i]
            s.count += 1
    free(fk)
    free(vk)
    free(used)
    return 0


cdef int _set_add(PairSet* s, uint64_t f, uint64_t v) except -1:
    """Insert the pair; returns 1 when it was absent, 0 when already present."""
    if s.count >= s.limit:
        _set_grow(s)
    cdef size_t slot = _mix(f, v) & s.mask
    while s.used[slot]:
        if s.fk[slot] == f and s.vk[slot] == v:
            return 0
        slot = (slot + 1) & s.mask
    s.used[slot] = 1
    s.fk[slot] = f
    s.vk[slot] = v
    s.count += 1
    return 1


cdef struct U64Vec:
    uint64_t* data
    size_t cap


cdef int _vec_init(U64Vec* a, size_t cap) except -1:
    a.data = <uint64_t*>malloc(cap * sizeof(uint64_t))
    if a.data == NULL:
        raise MemoryError()
    a.cap = cap
    return 0


cdef int _vec_reserve(U64Vec* a, size_t need) except -1:
    cdef uint64_t* grown
    cdef size_t cap = a.cap
    if need <= cap:
        return 0
    while cap < need:
        cap *= 2
    grown = <uint64_t*>realloc(a.data, cap * sizeof(uint64_t))
    if grown == NULL:
        raise MemoryError()
    a.data = grown
    a.cap = cap
    return 0


def complete_masks(atom_fs, atom_vs, max_elements=None):
    """Close a packed word set under pairwise join (see _pykernels twin)."""
    cdef Py_ssize_t n = len(atom_fs)
    cdef size_t budget
    if max_elements is None:
        budget = <size_t>0 - 1
    else:
        budget = <size_t>max_elements
    cdef size_t table = 1024
    while table < <size_t>(4 * n):
        table *= 2

    cdef PairSet seen
    cdef U64Vec fs, vs
    cdef size_t count = 0
    cdef Py_ssize_t i, j, limit
    cdef uint64_t fx, vx, fj, vj
    cdef object out_f, out_v

    _set_init(&seen, table)
    try:
        _vec_init(&fs, max(64, 2 * n))
    except:
        _set_free(&seen)
        raise
    try:
        _vec_init(&vs, fs.cap)
    except:
        _set_free(&seen)
        free(fs.data)
        raise

    try:
        for i in range(n):
            fj = <uint64_t>atom_fs[i]
            vj = <uint64_t>atom_vs[i]
            if not _set_add(&seen, fj, vj):
                raise ValueError("atoms must be deduplicated")
            _vec_reserve(&fs, count + 1)
            _vec_reserve(&vs, count + 1)
            fs.data[count] = fj
            vs.data[count] = vj
            count += 1

        for i in range(n):
            fx = fs.data[i]
            vx = vs.data[i]
            limit = <Py_ssize_t>count  # snapshot at the start of this sweep
            for j in range(i + 1, limit):
                fj = fx & fs.data[j] & ~(vx ^ vs.data[j])
                vj = vx & fj
                if _set_add(&seen, fj, vj):
                    _vec_reserve(&fs, count + 1)
                    _vec_reserve(&vs, count + 1)
                    fs.data[count] = fj
                    vs.data[count] = vj
                    count += 1
                    if count > budget:
                        raise BudgetExceeded(
                            f"completion exceeded {max_elements} elements"
                        )

        out_f = [0] * count
        out_v = [0] * count
        for i in range(<Py_ssize_t>count):
            out_f[i] = fs.data[i]
            out_v[i] = vs.data[i]
        return out_f, out_v
    finally:
        _set_free(&seen)
        free(fs.data)
        free(vs.data)


def schema_stats(elem_fs, elem_vs, word_vs, weights):
    """Per-element order, defining length, instance count and weight sum
    (see _pykernels twin)."""
    cdef Py_ssize_t n = len(elem_fs)
    cdef Py_ssize_t m = len(word_vs)
    if len(weights) != m:
        raise ValueError("weights must match word_vs")

    cdef uint64_t* wv = <uint64_t*>malloc(max(m, 1) * sizeof(uint64_t))
    cdef double* wt = <double*>malloc(max(m, 1) * sizeof(double))
    if wv == NULL or wt == NULL:
        free(wv)
        free(wt)
        raise MemoryError()

    cdef Py_ssize_t i, w
    cdef uint64_t f, v
    cdef int o
    cdef long cnt
    cdef double acc
    orders = [0] * n
    dls = [0] * n
    counts = [0] * n
    wsums = [0.0] * n
    try:
        for w in range(m):
            wv[w] = <uint64_t>word_vs[w]
            wt[w] = <double>weights[w]
        for i in range(n):
            f = <uint64_t>elem_fs[i]
            v = <uint64_t>elem_vs[i]
            o = SL_POPCOUNT(f)
            orders[i] = o
            dls[i] = (63 - SL_CLZ(f)) - SL_CTZ(f) if o else -1
            cnt = 0
            acc = 0.0
            for w in range(m):
                if ((wv[w] ^ v) & f) == 0:
                    cnt += 1
                    acc += wt[w]
            counts[i] = cnt
            wsums[i] = acc
        return orders, dls, counts, wsums
    finally:
        free(wv)
        free(wt)
