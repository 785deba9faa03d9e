"""Schematic completion and the complete lattice it spans.

``complete()`` finds every schema a population samples (the compressions of
all its subsets) by sweeping pairwise joins over the discovered set, exactly
once per unordered pair of sources.  The result is a finite lattice: it is
closed under join, the deduplicated population words are its atoms, and the
empty schema is its zero.  On binary alphabets the elements live in a packed
two-mask form and the sweep runs in the compiled kernel when available;
other alphabets take a character-tuple path.

Completions of converged GA populations routinely hold 10^5+ elements, so
``SchematicLattice`` materializes Schema objects lazily; the analysis module
works on the packed form directly and never asks for them.
"""

import itertools
from dataclasses import dataclass

from . import _backend
from ._packing import pack_cells, unpack_cells
from .errors import (
    BudgetExceeded,
    ElementNotInLattice,
    EmptyPopulation,
    InvalidSymbol,
    LengthMismatch,
)
from .schema import (
    EMPTY,
    WILDCARD,
    Alphabet,
    Schema,
    as_schema,
    blend,
    compress,
    infer_alphabet,
    is_instance,
    join,
    leq,
    _word_cells,
)

# Admits binary full spaces up to length 4 ((2+1)^4 + 1 = 82 elements).
DEFAULT_FULL_SPACE_BUDGET = 100


class SchematicLattice:
    """The set of schemata a population samples, ordered by expansion inclusion.

    Always contains the empty schema, is closed under pairwise join, and its
    atoms are exactly the deduplicated population words.  Instances are
    immutable; build them with :func:`complete` or :func:`full_space`.
    """

    __slots__ = ("alphabet", "length", "atom_words", "_packed", "_elements",
                 "_keys", "_covers", "_unit")

    def __init__(self, alphabet, length, atom_words, packed=None, elements=None):
        self.alphabet = alphabet
        self.length = length
        self.atom_words = tuple(atom_words)
        self._packed = packed          # (fs, vs) lists, atoms first, no EMPTY
        self._elements = elements      # frozenset[Schema] including EMPTY
        self._keys = None
        self._covers = None
        self._unit = None

    @property
    def elements(self):
        """Every element as a Schema, including the empty schema.

        Materialized on first access; packed binary lattices can be large, so
        prefer ``len(lattice)`` and the packed form for bulk work.
        """
        if self._elements is None:
            fs, vs = self._packed
            zero, one = self.alphabet.symbols
            els = {
                Schema(unpack_cells(f, v, self.length, zero, one))
                for f, v in zip(fs, vs)
            }
            els.add(EMPTY)
            self._elements = frozenset(els)
        return self._elements

    @property
    def atoms(self):
        """The population's distinct words, the elements covering EMPTY."""
        return frozenset(Schema(w) for w in self.atom_words)

    @property
    def zero(self):
        return EMPTY

    @property
    def unit(self):
        """Largest element: the join of all atoms."""
        if self._unit is None:
            acc = EMPTY
            for w in self.atom_words:
                acc = join(acc, Schema(w))
            self._unit = acc
        return self._unit

    def __len__(self):
        if self._packed is not None:
            return len(self._packed[0]) + 1
        return len(self._elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, schema):
        s = as_schema(schema)
        if s.is_empty:
            return True
        if s.length != self.length:
            return False
        if self._packed is not None:
            if self._keys is None:
                self._keys = set(zip(*self._packed))
            zero, one = self.alphabet.symbols
            try:
                return pack_cells(s.cells, zero, one) in self._keys
            except InvalidSymbol:
                return False
        return s in self._elements

    def _require(self, schemas):
        items = [as_schema(s) for s in schemas]
        for s in items:
            if s not in self:
                raise ElementNotInLattice(f"{s} is not in the lattice")
        return items

    def supremum(self, schemas):
        """Least upper bound of lattice elements: the fold of joins.

        An empty collection yields the zero element.
        """
        items = self._require(schemas)
        acc = EMPTY
        for s in items:
            acc = join(acc, s)
        return acc

    def infimum(self, schemas):
        """Greatest lower bound within the lattice.

        Blend the members; the infimum is the compression of the atoms that
        instance the blend (EMPTY when the blend conflicts or nothing does).
        """
        items = self._require(schemas)
        if not items:
            raise ValueError("infimum of no elements is undefined")
        b = blend(items)
        if b.is_empty:
            return EMPTY
        matching = [w for w in self.atom_words if is_instance(w, b)]
        return compress(matching, self.length) if matching else EMPTY

    def covers(self):
        """Cover pairs (lower, upper): the transitive reduction of <=.

        Elements are bucketed by antiorder; an upper candidate is a cover
        unless some other comparable element sits strictly between (ranks may
        be skipped inside a sublattice, so adjacency is not assumed).
        """
        if self._covers is None:
            by_rank = {}
            for s in self.elements:
                by_rank.setdefault(s.antiorder(), []).append(s)
            ranks = sorted(by_rank)
            result = set()
            for ra in ranks:
                for a in by_rank[ra]:
                    ups = [
                        b
                        for rb in ranks
                        if rb > ra
                        for b in by_rank[rb]
                        if leq(a, b)
                    ]
                    for b in ups:
                        if not any(c is not b and leq(c, b) for c in ups):
                            result.add((a, b))
            self._covers = frozenset(result)
        return self._covers

    def dump(self):
        """One element per line, ``antiorder cells``, sorted by (antiorder, text)."""
        ordered = sorted(self.elements, key=lambda s: (s.antiorder(), str(s)))
        return "".join(f"{s.antiorder()} {s}\n" for s in ordered)

    def check_join_closed(self):
        """Verify closure under pairwise join; debugging aid for tests."""
        els = self.elements
        for a in els:
            for b in els:
                if join(a, b) not in els:
                    raise AssertionError(f"join({a}, {b}) escaped the lattice")

    def __repr__(self):
        return (
            f"<SchematicLattice length={self.length} atoms={len(self.atom_words)} "
            f"elements={len(self)}>"
        )


def _dedupe_words(population):
    words = []
    seen = set()
    for w in population:
        cells = _word_cells(w)
        if cells not in seen:
            seen.add(cells)
            words.append(cells)
    return words


def complete(population, alphabet=None, max_elements=None):
    """Schematic completion: every schema some subset of the population
    compresses to, as a :class:`SchematicLattice`.

    Duplicate words are discarded (they change fitness statistics, never the
    lattice).  The alphabet is inferred from the words when not given.
    ``max_elements`` bounds the completion size; BudgetExceeded aborts runs
    whose lattice explodes.
    """
    words = _dedupe_words(population)
    if not words:
        raise EmptyPopulation("completion needs at least one word")
    length = len(words[0])
    for w in words:
        if len(w) != length:
            raise LengthMismatch(f"words of length {length} and {len(w)} mixed")
    if alphabet is None:
        alphabet = infer_alphabet(words)
    else:
        for w in words:
            for c in w:
                if c not in alphabet:
                    raise InvalidSymbol(f"{c!r} is not in the alphabet")

    if alphabet.is_binary:
        zero, one = alphabet.symbols
        fs = []
        vs = []
        for w in words:
            f, v = pack_cells(w, zero, one)
            fs.append(f)
            vs.append(v)
        fs, vs = _backend.complete_masks(fs, vs, length, max_elements)
        return SchematicLattice(alphabet, length, words, packed=(fs, vs))

    found = list(words)
    seen = set(found)
    for i in range(len(words)):
        x = found[i]
        for j in range(i + 1, len(found)):
            y = found[j]
            s = "".join(a if a == b else WILDCARD for a, b in zip(x, y))
            if s not in seen:
                seen.add(s)
                found.append(s)
                if max_elements is not None and len(found) > max_elements:
                    raise BudgetExceeded(
                        f"completion exceeded {max_elements} elements"
                    )
    elements = frozenset(itertools.chain((Schema(c) for c in found), (EMPTY,)))
    return SchematicLattice(alphabet, length, words, elements=elements)


def full_space(length, alphabet, max_elements=DEFAULT_FULL_SPACE_BUDGET):
    """The lattice of all schemata of a given length: the completion of Σ^l.

    Its (|Σ|+1)^l + 1 elements must fit the budget; the default admits
    binary lengths up to 4.
    """
    size = (len(alphabet) + 1) ** length + 1
    if size > max_elements:
        raise BudgetExceeded(
            f"full space has {size} elements, budget is {max_elements}"
        )
    return complete(alphabet.words(length), alphabet)


def _pairwise_closure(keys, blend2):
    """Close ``keys`` under a pairwise blend; None is the absorbing conflict."""
    closed = set(keys)
    frontier = list(closed)
    while frontier:
        snapshot = list(closed)
        fresh = []
        for s in frontier:
            if s is None:
                continue
            for t in snapshot:
                if t is None:
                    continue
                b = blend2(s, t)
                if b not in closed:
                    closed.add(b)
                    fresh.append(b)
        frontier = fresh
    return closed


def _blend2_cells(x, y):
    out = []
    for a, b in zip(x, y):
        if a == WILDCARD:
            out.append(b)
        elif b == WILDCARD or a == b:
            out.append(a)
        else:
            return None
    return "".join(out)


def blend_closure(schemas):
    """Close a set of schemata under blending.

    Contains every blend of every nonempty subset: the input itself
    (singleton blends) and the empty schema exactly when some pair is
    unblendable.  Idempotent: closing a closure changes nothing.
    """
    items = {as_schema(s) for s in schemas}
    if not items:
        return frozenset()
    lengths = {s.length for s in items if not s.is_empty}
    if len(lengths) > 1:
        raise LengthMismatch(f"mixed lengths {sorted(lengths)}")

    has_empty = any(s.is_empty for s in items)
    cells = [s.cells for s in items if not s.is_empty]
    if not cells:
        return frozenset({EMPTY})
    length = len(cells[0])

    symbols = sorted({c for w in cells for c in w if c != WILDCARD})
    if len(symbols) == 2:
        zero, one = symbols
        keys = {pack_cells(w, zero, one) for w in cells}
        if has_empty:
            keys.add(None)

        def blend2(a, b):
            if a[0] & b[0] & (a[1] ^ b[1]):
                return None
            return a[0] | b[0], a[1] | b[1]

        closed = _pairwise_closure(keys, blend2)
        return frozenset(
            EMPTY if k is None else Schema(unpack_cells(k[0], k[1], length, zero, one))
            for k in closed
        )

    keys = set(cells)
    if has_empty:
        keys.add(None)
    closed = _pairwise_closure(keys, _blend2_cells)
    return frozenset(EMPTY if k is None else Schema(k) for k in closed)


@dataclass(frozen=True)
class LatticeMarking:
    """Partition of a full schema space by what a population can reach.

    ``sampled`` is the population's completion, ``reachable`` what blending
    sampled schemata adds, ``unreachable`` the rest; the three classes are
    disjoint and cover the space.
    """

    space: SchematicLattice
    sampled: frozenset
    reachable: frozenset
    unreachable: frozenset


def mark_reachability(population, alphabet=None, max_elements=DEFAULT_FULL_SPACE_BUDGET):
    """Classify every schema of the full space against a population.

    The sampled class is the population's completion; the reachable class is
    its blend closure minus itself — blending never escapes the downsets of
    what is already sampled, so the unreachable class is typically nonempty.
    """
    lat = complete(population, alphabet)
    space = full_space(lat.length, lat.alphabet, max_elements)
    sampled = lat.elements
    reachable = frozenset(blend_closure(sampled) - sampled)
    unreachable = frozenset(space.elements - sampled - reachable)
    return LatticeMarking(space, frozenset(sampled), reachable, unreachable)


def to_dot(lattice, marking=None):
    """Render the Hasse diagram as a DOT digraph.

    One node per element labeled with its text form (``^`` for the empty
    schema), one edge per cover pair drawn from upper to lower, and one
    ``rank=same`` row per antiorder so higher antiorder sits higher.  With a
    marking, sampled nodes are bold, reachable ones solid, the rest dotted.
    """
    def node_id(s):
        return f'"{s}"'

    elems = sorted(lattice.elements, key=lambda s: (-s.antiorder(), str(s)))
    style = {}
    if marking is not None:
        for s in marking.sampled:
            style[s] = "bold"
        for s in marking.reachable:
            style[s] = "solid"
        for s in marking.unreachable:
            style[s] = "dotted"

    lines = ["digraph schematic_lattice {", "  edge [dir=none];"]
    for s in elems:
        if s in style:
            lines.append(f"  {node_id(s)} [style={style[s]}];")
        else:
            lines.append(f"  {node_id(s)};")
    for rank in sorted({s.antiorder() for s in elems}, reverse=True):
        row = " ".join(
            f"{node_id(s)};" for s in elems if s.antiorder() == rank
        )
        lines.append(f"  {{ rank=same; {row} }}")
    edges = sorted(
        (str(upper), str(lower)) for lower, upper in lattice.covers()
    )
    for upper, lower in edges:
        lines.append(f'  "{upper}" -> "{lower}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
