"""Pure-Python counting kernel.  Same contract as the compiled one, no overflow."""


def count_table(offsets, targets, kind, nstates, start, word):
    """Forward path-count DP over a flat successor table.

    ``word`` is a sequence of tape-symbol indices (endmarkers included).
    Returns ``(accepting, rejecting, improper)``.
    """
    if kind[start] == 1:
        return 1, 0, 0
    if kind[start] == 2:
        return 0, 1, 0
    acc = rej = imp = 0
    cur = {start: 1}
    for s in word:
        base = s * nstates
        nxt = {}
        for q, c in cur.items():
            lo = offsets[base + q]
            hi = offsets[base + q + 1]
            if lo == hi:
                imp += c
                continue
            for i in range(lo, hi):
                t = targets[i]
                k = kind[t]
                if k == 1:
                    acc += c
                elif k == 2:
                    rej += c
                else:
                    nxt[t] = nxt.get(t, 0) + c
        cur = nxt
        if not cur:
            break
    imp += sum(cur.values())
    return acc, rej, imp
