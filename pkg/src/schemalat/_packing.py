"""Packed two-mask representation of binary-alphabet schemata.

A schema over a two-symbol alphabet packs into a pair of ints: bit i of the
fixed mask is set when cell i is not the wildcard, and bit i of the value
mask is set when cell i holds the alphabet's second symbol.  Bit 0 is the
leftmost cell.  Value bits at wildcard positions are always zero, so equal
schemata pack to equal pairs and the pairs can be hashed directly.

Plain Python ints keep this exact for any length; the compiled kernels use
the same layout restricted to 64 bits.
"""

from .errors import InvalidSymbol
from .schema import WILDCARD


def pack_cells(cells, zero, one):
    """Pack a schema's cells into a (fixed, value) mask pair."""
    fixed = value = 0
    bit = 1
    for c in cells:
        if c != WILDCARD:
            fixed |= bit
            if c == one:
                value |= bit
            elif c != zero:
                raise InvalidSymbol(f"{c!r} is not in the binary alphabet")
        bit <<= 1
    return fixed, value


def pack_word(word, zero, one):
    """Value mask of a fully fixed word (its fixed mask is all ones)."""
    value = 0
    bit = 1
    for c in word:
        if c == one:
            value |= bit
        elif c != zero:
            raise InvalidSymbol(f"{c!r} is not in the binary alphabet")
        bit <<= 1
    return value


def unpack_cells(fixed, value, length, zero, one):
    """Inverse of pack_cells."""
    out = []
    bit = 1
    for _ in range(length):
        if fixed & bit:
            out.append(one if value & bit else zero)
        else:
            out.append(WILDCARD)
        bit <<= 1
    return "".join(out)


def join_masks(fa, va, fb, vb):
    """Mask form of the character-wise join (agreeing cells stay fixed)."""
    f = fa & fb & ~(va ^ vb)
    return f, va & f


def blend_masks(fa, va, fb, vb):
    """Mask form of the pairwise blend; None when the pair conflicts."""
    if fa & fb & (va ^ vb):
        return None
    return fa | fb, va | vb


def leq_masks(fa, va, fb, vb):
    """Mask form of the schema ordering (a <= b)."""
    return not (fb & ~fa) and not ((va ^ vb) & fb)
