# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels; same instruction layout and semantics as
the pure module, just fast. Keep the two in lockstep."""

from cpython.bytearray cimport PyByteArray_AsString
from libc.stdlib cimport free, malloc

DEF OP_TRUE = 0
DEF OP_FALSE = 1
DEF OP_NOT = 2
DEF OP_AND = 3
DEF OP_OR = 4
DEF OP_IMPLIES = 5
DEF OP_IFF = 6
DEF OP_ATOM = 7
DEF OP_NEXT = 8
DEF OP_WNEXT = 9
DEF OP_UNTIL = 10
DEF OP_RELEASE = 11
DEF OP_EVENTUALLY = 12
DEF OP_GLOBALLY = 13
DEF OP_PRED = 14
DEF OP_CMP_IND = 15
DEF OP_CMP_INT = 16
DEF OP_FORALL = 17
DEF OP_EXISTS = 18

DEF STRIDE = 8

HIT = 0
EXHAUSTED = 1
MORE = 2


def ltlf_table(long long[:] code, int n_nodes, unsigned long long[:] masks):
    cdef int n = masks.shape[0]
    cdef bytearray out = bytearray(n_nodes * n)
    cdef char* tab = PyByteArray_AsString(out)
    cdef int i, node, has_next
    cdef long long op, f1, f2
    cdef int v
    for i in range(n - 1, -1, -1):
        has_next = 1 if i + 1 < n else 0
        for node in range(n_nodes):
            op = code[node * STRIDE]
            f1 = code[node * STRIDE + 1]
            f2 = code[node * STRIDE + 2]
            if op == OP_TRUE:
                v = 1
            elif op == OP_FALSE:
                v = 0
            elif op == OP_ATOM:
                v = <int>((masks[i] >> f1) & 1)
            elif op == OP_NOT:
                v = 1 - tab[f1 * n + i]
            elif op == OP_AND:
                v = tab[f1 * n + i] & tab[f2 * n + i]
            elif op == OP_OR:
                v = tab[f1 * n + i] | tab[f2 * n + i]
            elif op == OP_IMPLIES:
                v = (1 - tab[f1 * n + i]) | tab[f2 * n + i]
            elif op == OP_IFF:
                v = 1 if tab[f1 * n + i] == tab[f2 * n + i] else 0
            elif op == OP_NEXT:
                v = tab[f1 * n + i + 1] if has_next else 0
            elif op == OP_WNEXT:
                v = tab[f1 * n + i + 1] if has_next else 1
            elif op == OP_UNTIL:
                v = tab[f2 * n + i] or (
                    tab[f1 * n + i] and has_next and tab[node * n + i + 1])
            elif op == OP_RELEASE:
                v = tab[f2 * n + i] and (
                    tab[f1 * n + i] or (not has_next) or tab[node * n + i + 1])
            elif op == OP_EVENTUALLY:
                v = tab[f1 * n + i] or (has_next and tab[node * n + i + 1])
            elif op == OP_GLOBALLY:
                v = tab[f1 * n + i] and ((not has_next) or tab[node * n + i + 1])
            else:
                raise ValueError("bad temporal opcode %d" % op)
            tab[node * n + i] = 1 if v else 0
    return out


cdef long long _term(long long* code, long long src, long long a, long long b,
                     long long* func_vals, long long* env, int n_ind):
    if src == 0:  # literal
        return a
    return func_vals[a * n_ind + env[b]]


cdef bint _compare(long long op, long long lv, long long rv):
    if op == 0:
        return lv == rv
    if op == 1:
        return lv != rv
    if op == 2:
        return lv < rv
    if op == 3:
        return lv <= rv
    if op == 4:
        return lv > rv
    return lv >= rv


cdef bint _ev(long long* code, long long node, int n_ind,
              long long* pred_masks, long long* func_vals, long long* env):
    cdef long long base = node * STRIDE
    cdef long long op = code[base]
    cdef long long slot, body
    cdef long long lv, rv
    cdef int ind
    if op == OP_TRUE:
        return True
    if op == OP_FALSE:
        return False
    if op == OP_PRED:
        return ((pred_masks[env[code[base + 2]]] >> code[base + 1]) & 1) == 1
    if op == OP_CMP_IND:
        if code[base + 1] == 0:
            return env[code[base + 2]] == env[code[base + 3]]
        return env[code[base + 2]] != env[code[base + 3]]
    if op == OP_CMP_INT:
        lv = _term(code, code[base + 2], code[base + 3], code[base + 4],
                   func_vals, env, n_ind)
        rv = _term(code, code[base + 5], code[base + 6], code[base + 7],
                   func_vals, env, n_ind)
        return _compare(code[base + 1], lv, rv)
    if op == OP_NOT:
        return not _ev(code, code[base + 1], n_ind, pred_masks, func_vals, env)
    if op == OP_AND:
        return (_ev(code, code[base + 1], n_ind, pred_masks, func_vals, env)
                and _ev(code, code[base + 2], n_ind, pred_masks, func_vals, env))
    if op == OP_OR:
        return (_ev(code, code[base + 1], n_ind, pred_masks, func_vals, env)
                or _ev(code, code[base + 2], n_ind, pred_masks, func_vals, env))
    if op == OP_IMPLIES:
        return ((not _ev(code, code[base + 1], n_ind, pred_masks, func_vals, env))
                or _ev(code, code[base + 2], n_ind, pred_masks, func_vals, env))
    if op == OP_IFF:
        return (_ev(code, code[base + 1], n_ind, pred_masks, func_vals, env)
                == _ev(code, code[base + 2], n_ind, pred_masks, func_vals, env))
    if op == OP_FORALL:
        slot = code[base + 1]
        body = code[base + 2]
        for ind in range(n_ind):
            env[slot] = ind
            if not _ev(code, body, n_ind, pred_masks, func_vals, env):
                return False
        return True
    if op == OP_EXISTS:
        slot = code[base + 1]
        body = code[base + 2]
        for ind in range(n_ind):
            env[slot] = ind
            if _ev(code, body, n_ind, pred_masks, func_vals, env):
                return True
        return False
    raise ValueError("bad relational opcode %d" % op)


def fo_eval(long long[:] code, long long root, int n_ind,
            long long[:] pred_masks, long long[:] func_vals,
            long long[:] env):
    return bool(_ev(&code[0], root, n_ind,
                    &pred_masks[0] if pred_masks.shape[0] else NULL,
                    &func_vals[0] if func_vals.shape[0] else NULL,
                    &env[0]))


def fo_scan(long long[:] code, long long root, int n_slots, int size,
            int n_preds, long long[:] func_los, long long[:] radii,
            unsigned long long ext, long long[:] digits, long long max_count):
    """Mirror of pure.fo_scan over machine-word extension counters."""
    cdef int n_digits = radii.shape[0]
    cdef int n_funcs = n_digits // size if size else 0
    cdef int k = size * n_preds
    cdef unsigned long long ext_limit = (<unsigned long long>1) << k
    cdef long long scanned = 0
    cdef int status = MORE
    cdef int i, p, fi, d
    cdef long long q

    cdef long long* masks = <long long*>malloc(size * sizeof(long long))
    cdef long long* vals = <long long*>malloc(
        (n_digits if n_digits else 1) * sizeof(long long))
    cdef long long* env = <long long*>malloc(
        (n_slots if n_slots else 1) * sizeof(long long))
    cdef long long* dig = <long long*>malloc(
        (n_digits if n_digits else 1) * sizeof(long long))
    if masks == NULL or vals == NULL or env == NULL or dig == NULL:
        free(masks); free(vals); free(env); free(dig)
        raise MemoryError()
    for d in range(n_digits):
        dig[d] = digits[d]
    for d in range(n_slots):
        env[d] = 0

    try:
        while scanned < max_count:
            for i in range(size):
                masks[i] = 0
                for p in range(n_preds):
                    q = i * n_preds + p
                    if (ext >> (k - 1 - q)) & 1:
                        masks[i] |= (<long long>1) << p
            for fi in range(n_funcs):
                for i in range(size):
                    vals[fi * size + i] = func_los[fi] + dig[fi * size + i]
            scanned += 1
            if _ev(&code[0], root, size, masks, vals, env):
                status = HIT
                break
            # advance: function odometer fastest, then the extension counter
            d = n_digits - 1
            while d >= 0:
                if dig[d] + 1 < radii[d]:
                    dig[d] += 1
                    break
                dig[d] = 0
                d -= 1
            if d < 0:
                ext += 1
                if ext >= ext_limit:
                    status = EXHAUSTED
                    break
        if status == EXHAUSTED:
            # match pure.fo_scan: counters are zeroed once a size is swept
            return status, 0, [0] * n_digits, scanned
        out_digits = [dig[d] for d in range(n_digits)]
        return status, ext, out_digits, scanned
    finally:
        free(masks); free(vals); free(env); free(dig)
