"""Pure-Python twins of the compiled completion kernels.

Same contracts and same discovery order as ``schemalat._ckernels``; these run
when the extension is not built, and for word lengths beyond 64 bits where
the compiled kernels do not apply (Python ints are unbounded).
"""

from .errors import BudgetExceeded


def complete_masks(atom_fs, atom_vs, max_elements=None):
    """Close a packed word set under pairwise join.

    ``atom_fs``/``atom_vs`` are the deduplicated population words in packed
    form (all-fixed masks).  Returns the discovered (fixed, value) lists in
    discovery order, atoms first, without the empty schema.  Raises
    BudgetExceeded once more than ``max_elements`` schemata exist.

    Each atom sweeps the elements discovered before its turn started; joins
    it contributes are swept by later atoms only.  The result is join-closed
    and independent of atom order either way.
    """
    fs = list(atom_fs)
    vs = list(atom_vs)
    seen = set(zip(fs, vs))
    if len(seen) != len(fs):
        raise ValueError("atoms must be deduplicated")
    for i in range(len(atom_fs)):
        fx = fs[i]
        vx = vs[i]
        # range() pins the snapshot taken when this atom's sweep begins.
        for j in range(i + 1, len(fs)):
            fj = fx & fs[j] & ~(vx ^ vs[j])
            vj = vx & fj
            key = (fj, vj)
            if key not in seen:
                seen.add(key)
                fs.append(fj)
                vs.append(vj)
                if max_elements is not None and len(fs) > max_elements:
                    raise BudgetExceeded(
                        f"completion exceeded {max_elements} elements"
                    )
    return fs, vs


def schema_stats(elem_fs, elem_vs, word_vs, weights):
    """Per-element order, defining length, instance count and weight sum.

    ``word_vs`` are packed population words (duplicates allowed) and
    ``weights`` their fitness values.  Defining length is -1 for elements
    with no fixed cell.
    """
    orders = []
    dls = []
    counts = []
    wsums = []
    pairs = list(zip(word_vs, weights))
    for f, v in zip(elem_fs, elem_vs):
        o = f.bit_count()
        orders.append(o)
        if o:
            dls.append(f.bit_length() - (f & -f).bit_length())
        else:
            dls.append(-1)
        c = 0
        s = 0.0
        for wv, wt in pairs:
            if not ((wv ^ v) & f):
                c += 1
                s += wt
        counts.append(c)
        wsums.append(s)
    return orders, dls, counts, wsums
