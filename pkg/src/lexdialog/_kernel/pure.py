"""Pure-Python evaluation kernels: the reference backend.

The compiled backend (_speed, Cython) implements exactly these functions
over the same instruction layout; either can serve every call.
"""

from __future__ import annotations

from .encode import (OP_AND, OP_ATOM, OP_CMP_IND, OP_CMP_INT, OP_EVENTUALLY,
                     OP_EXISTS, OP_FALSE, OP_FORALL, OP_GLOBALLY, OP_IFF,
                     OP_IMPLIES, OP_NEXT, OP_NOT, OP_OR, OP_PRED, OP_RELEASE,
                     OP_TRUE, OP_UNTIL, OP_WNEXT, SRC_LITERAL, STRIDE,
                     advance_candidate, candidate_encoding)

HIT = 0
EXHAUSTED = 1
MORE = 2


def ltlf_table(code, n_nodes: int, masks) -> bytearray:
    """Truth table of every node at every trace position, node-major.

    One backward pass over positions; each cell reads its children at the
    same position and (for temporal operators) itself one step later, so the
    whole table costs O(positions * nodes).
    """
    n = len(masks)
    tab = bytearray(n_nodes * n)
    for i in range(n - 1, -1, -1):
        has_next = i + 1 < n
        for node in range(n_nodes):
            base = node * STRIDE
            op = code[base]
            f1 = code[base + 1]
            f2 = code[base + 2]
            if op == OP_TRUE:
                v = 1
            elif op == OP_FALSE:
                v = 0
            elif op == OP_ATOM:
                v = (masks[i] >> f1) & 1
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
                    tab[f1 * n + i] or not has_next or tab[node * n + i + 1])
            elif op == OP_EVENTUALLY:
                v = tab[f1 * n + i] or (has_next and tab[node * n + i + 1])
            elif op == OP_GLOBALLY:
                v = tab[f1 * n + i] and (not has_next or tab[node * n + i + 1])
            else:
                raise ValueError(f"bad temporal opcode {op}")
            tab[node * n + i] = 1 if v else 0
    return tab


def fo_eval(code, root: int, n_ind: int, pred_masks, func_vals, env) -> bool:
    """Tarskian evaluation of an encoded relational formula; quantifier
    slots in env are scratch space owned by this call."""

    def term(src, a, b) -> int:
        if src == SRC_LITERAL:
            return a
        return func_vals[a * n_ind + env[b]]

    def compare(op, lv, rv) -> bool:
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

    def ev(node: int) -> bool:
        base = node * STRIDE
        op = code[base]
        if op == OP_TRUE:
            return True
        if op == OP_FALSE:
            return False
        if op == OP_PRED:
            return (pred_masks[env[code[base + 2]]] >> code[base + 1]) & 1 == 1
        if op == OP_CMP_IND:
            same = env[code[base + 2]] == env[code[base + 3]]
            return same if code[base + 1] == 0 else not same
        if op == OP_CMP_INT:
            lv = term(code[base + 2], code[base + 3], code[base + 4])
            rv = term(code[base + 5], code[base + 6], code[base + 7])
            return compare(code[base + 1], lv, rv)
        if op == OP_NOT:
            return not ev(code[base + 1])
        if op == OP_AND:
            return ev(code[base + 1]) and ev(code[base + 2])
        if op == OP_OR:
            return ev(code[base + 1]) or ev(code[base + 2])
        if op == OP_IMPLIES:
            return not ev(code[base + 1]) or ev(code[base + 2])
        if op == OP_IFF:
            return ev(code[base + 1]) == ev(code[base + 2])
        if op == OP_FORALL:
            slot, body = code[base + 1], code[base + 2]
            for ind in range(n_ind):
                env[slot] = ind
                if not ev(body):
                    return False
            return True
        if op == OP_EXISTS:
            slot, body = code[base + 1], code[base + 2]
            for ind in range(n_ind):
                env[slot] = ind
                if ev(body):
                    return True
            return False
        raise ValueError(f"bad relational opcode {op}")

    return ev(root)


def fo_scan(code, root: int, n_slots: int, size: int, n_preds: int,
            func_los, radii, ext: int, digits, max_count: int):
    """Evaluate candidate models starting at (ext, digits) inclusive, in
    enumeration order, for at most max_count candidates.

    Returns (status, ext, digits, scanned): HIT with the satisfying
    candidate, EXHAUSTED when the size is fully searched, or MORE with the
    next candidate to resume from.
    """
    digits = list(digits)
    env = [0] * max(n_slots, 1)
    scanned = 0
    while scanned < max_count:
        masks, vals = candidate_encoding(ext, digits, size, n_preds, func_los)
        scanned += 1
        if fo_eval(code, root, size, masks, vals, env):
            return HIT, ext, digits, scanned
        nxt = advance_candidate(ext, digits, size, n_preds, radii)
        if nxt is None:
            # counters are meaningless once the size is swept; zero them so
            # both backends return identical tuples
            return EXHAUSTED, 0, [0] * len(digits), scanned
        ext, digits = nxt
    return MORE, ext, digits, scanned
