"""Schemata over a finite alphabet: wildcards, expansion, compression, ordering.

A schema is a fixed-length word over the alphabet extended with the wildcard
symbol ``*``; it stands for the set of words obtained by filling in its
wildcards.  The distinguished empty schema (written ``^`` in text form) has an
empty expansion and sits below every other schema.

All values here are immutable and every function is pure, so they can be
shared freely between threads and processes.
"""

import itertools

from .errors import (
    BudgetExceeded,
    EmptySchema,
    InvalidSymbol,
    LengthMismatch,
    NotAWord,
    UndefinedDefiningLength,
)

WILDCARD = "*"
EMPTY_TOKEN = "^"

# Default enumeration budget for expand(); callers with bigger appetites pass
# their own cap.  Schemata with antiorder 60+ occur in practice, so nothing in
# this package enumerates an expansion except expand() itself.
DEFAULT_EXPANSION_BUDGET = 1 << 16

_RESERVED = {WILDCARD, EMPTY_TOKEN}


class Alphabet:
    """An ordered collection of at least two distinct single-character symbols.

    ``*`` and ``^`` are reserved for the wildcard and the empty schema's text
    form and cannot be symbols.  Iteration order is construction order and is
    stable, which makes packed representations and CSV output deterministic.
    """

    __slots__ = ("symbols", "_index")

    def __init__(self, symbols):
        syms = tuple(symbols)
        if len(syms) < 2:
            raise ValueError("an alphabet needs at least two symbols")
        if len(set(syms)) != len(syms):
            raise ValueError(f"duplicate symbols in alphabet: {syms!r}")
        for s in syms:
            if not isinstance(s, str) or len(s) != 1:
                raise ValueError(f"symbols must be single characters, got {s!r}")
            if s in _RESERVED or s.isspace():
                raise ValueError(f"reserved or whitespace symbol: {s!r}")
        self.symbols = syms
        self._index = {s: i for i, s in enumerate(syms)}

    @classmethod
    def binary(cls):
        return cls("01")

    @property
    def is_binary(self):
        return len(self.symbols) == 2

    def index(self, symbol):
        try:
            return self._index[symbol]
        except KeyError:
            raise InvalidSymbol(f"{symbol!r} is not in the alphabet") from None

    def __contains__(self, symbol):
        return symbol in self._index

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __eq__(self, other):
        if not isinstance(other, Alphabet):
            return NotImplemented
        return self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return f"Alphabet({''.join(self.symbols)!r})"

    def words(self, length):
        """Iterate all words of the given length, in symbol order."""
        for combo in itertools.product(self.symbols, repeat=length):
            yield "".join(combo)

    def parse_schema(self, text):
        """Parse the textual schema form; ``^`` denotes the empty schema.

        Raises InvalidSymbol for characters outside the alphabet plus ``*``.
        """
        if text == EMPTY_TOKEN:
            return EMPTY
        for c in text:
            if c != WILDCARD and c not in self._index:
                raise InvalidSymbol(f"{c!r} is not in the alphabet or the wildcard")
        return Schema(text)

    def parse_word(self, text):
        """Parse a word (no wildcards), returning it as a plain string."""
        if WILDCARD in text or text == EMPTY_TOKEN:
            raise NotAWord(f"not a word: {text!r}")
        for c in text:
            if c not in self._index:
                raise InvalidSymbol(f"{c!r} is not in the alphabet")
        return text


def infer_alphabet(words):
    """Alphabet of the distinct symbols appearing in ``words``.

    Inputs drawn from {0,1} infer the full binary alphabet even when only one
    of the two symbols occurs; any other single-symbol input is rejected
    because a valid alphabet needs two symbols (pass one explicitly).
    """
    seen = set()
    for w in words:
        seen.update(w)
    seen.discard(WILDCARD)
    if seen and seen <= {"0", "1"}:
        return Alphabet.binary()
    if len(seen) < 2:
        raise ValueError(
            "cannot infer an alphabet from fewer than two distinct symbols; "
            "pass one explicitly"
        )
    return Alphabet(sorted(seen))


class Schema:
    """A word over the alphabet plus ``*``, or the distinguished empty schema.

    Instances are immutable; equality and hashing are cell-by-cell, and the
    empty schema equals only itself.  ``cells`` is the plain string of cells,
    or None for the empty schema (which carries no intrinsic length).
    """

    __slots__ = ("cells",)

    def __init__(self, cells):
        if cells is None:
            self.cells = None
            return
        text = cells if isinstance(cells, str) else "".join(cells)
        if not text:
            raise ValueError("a schema has at least one cell; use EMPTY instead")
        if EMPTY_TOKEN in text:
            raise InvalidSymbol(f"{EMPTY_TOKEN!r} is reserved for the empty schema")
        self.cells = text

    @property
    def is_empty(self):
        return self.cells is None

    @property
    def is_word(self):
        """True when every cell is fixed (the schema is a plain word)."""
        return self.cells is not None and WILDCARD not in self.cells

    @property
    def length(self):
        return None if self.cells is None else len(self.cells)

    def order(self, context_length=None):
        """Number of fixed cells.

        The empty schema has order ``l + 1`` by convention, where ``l`` comes
        from the ambient context and must be passed in.
        """
        if self.cells is None:
            if context_length is None:
                raise EmptySchema("the empty schema's order needs a context length")
            return context_length + 1
        return len(self.cells) - self.cells.count(WILDCARD)

    def antiorder(self):
        """Number of wildcard cells; -1 for the empty schema (rank convention)."""
        if self.cells is None:
            return -1
        return self.cells.count(WILDCARD)

    def defining_length(self):
        """Index distance between the first and the last fixed cell."""
        if self.cells is None:
            raise UndefinedDefiningLength("the empty schema has no fixed cells")
        first = last = None
        for i, c in enumerate(self.cells):
            if c != WILDCARD:
                if first is None:
                    first = i
                last = i
        if first is None:
            raise UndefinedDefiningLength(f"{self.cells!r} has no fixed cells")
        return last - first

    def __eq__(self, other):
        if isinstance(other, Schema):
            return self.cells == other.cells
        return NotImplemented

    def __hash__(self):
        return hash(self.cells)

    def __le__(self, other):
        return leq(self, other)

    def __ge__(self, other):
        return leq(other, self)

    def __lt__(self, other):
        return self != other and leq(self, other)

    def __gt__(self, other):
        return self != other and leq(other, self)

    def __or__(self, other):
        return join(self, other)

    def __str__(self):
        return EMPTY_TOKEN if self.cells is None else self.cells

    def __repr__(self):
        if self.cells is None:
            return "EMPTY"
        return f"Schema({self.cells!r})"


EMPTY = Schema(None)


def as_schema(value):
    """Coerce a string (or Schema) to a Schema; ``^`` means the empty schema."""
    if isinstance(value, Schema):
        return value
    if isinstance(value, str):
        return EMPTY if value == EMPTY_TOKEN else Schema(value)
    raise TypeError(f"expected Schema or str, got {type(value).__name__}")


def _word_cells(value):
    """Cells of a word given as str or zero-wildcard Schema."""
    if isinstance(value, Schema):
        if value.is_empty:
            raise NotAWord("the empty schema is not a word")
        cells = value.cells
    elif isinstance(value, str):
        cells = value
    else:
        raise TypeError(f"expected a word, got {type(value).__name__}")
    if WILDCARD in cells:
        raise NotAWord(f"not a word: {cells!r}")
    if not cells or cells == EMPTY_TOKEN:
        raise NotAWord(f"not a word: {cells!r}")
    return cells


def _check_lengths(a, b):
    if len(a) != len(b):
        raise LengthMismatch(f"length {len(a)} vs {len(b)}")


def leq(a, b):
    """Schema ordering: a <= b iff a's expansion is contained in b's.

    Decided character-wise (``a_i == b_i or b_i == '*'``) without enumerating
    any expansion; the empty schema is below everything.
    """
    a = as_schema(a)
    b = as_schema(b)
    if a.cells is None:
        return True
    if b.cells is None:
        return False
    _check_lengths(a.cells, b.cells)
    return all(x == y or y == WILDCARD for x, y in zip(a.cells, b.cells))


def join(a, b):
    """Least upper bound of two schemata: keep agreeing cells, wildcard the rest.

    Equals the compression of the union of the two expansions.  The empty
    schema is the identity.
    """
    a = as_schema(a)
    b = as_schema(b)
    if a.cells is None:
        return b
    if b.cells is None:
        return a
    _check_lengths(a.cells, b.cells)
    return Schema(
        "".join(x if x == y else WILDCARD for x, y in zip(a.cells, b.cells))
    )


def blend(schemas):
    """Most specific schema matching everything all members match.

    A cell is fixed to a symbol when some member fixes it and nobody fixes a
    different one.  Members fixing conflicting symbols make the set
    unblendable and the result is EMPTY, as it is when any member is EMPTY or
    the collection itself is empty.
    """
    items = [as_schema(s) for s in schemas]
    if not items or any(s.cells is None for s in items):
        return EMPTY
    length = len(items[0].cells)
    for s in items[1:]:
        if len(s.cells) != length:
            raise LengthMismatch(f"length {length} vs {len(s.cells)}")
    out = []
    for column in zip(*(s.cells for s in items)):
        fixed = {c for c in column if c != WILDCARD}
        if len(fixed) > 1:
            return EMPTY
        out.append(fixed.pop() if fixed else WILDCARD)
    return Schema("".join(out))


def expand(schema, alphabet, cap=DEFAULT_EXPANSION_BUDGET):
    """All words obtained by substituting alphabet symbols for wildcards.

    The result has ``|alphabet| ** antiorder`` members, which must not exceed
    ``cap``; BudgetExceeded signals that the caller should switch to
    character-wise operations instead of enumerating.
    """
    s = as_schema(schema)
    if s.cells is None:
        return frozenset()
    size = len(alphabet) ** s.antiorder()
    if size > cap:
        raise BudgetExceeded(f"expansion has {size} words, budget is {cap}")
    choices = []
    for c in s.cells:
        if c == WILDCARD:
            choices.append(alphabet.symbols)
        else:
            alphabet.index(c)  # raises InvalidSymbol for foreign cells
            choices.append((c,))
    return frozenset("".join(combo) for combo in itertools.product(*choices))


def compress(words, length=None):
    """Most specific schema matching every given word.

    Cell i keeps the common symbol when all words agree there and is ``*``
    otherwise; no words at all compress to EMPTY and a single word compresses
    to itself.  ``length`` is an optional expected length to validate against.
    """
    cells_list = [_word_cells(w) for w in words]
    if not cells_list:
        return EMPTY
    expected = len(cells_list[0]) if length is None else length
    for cells in cells_list:
        if len(cells) != expected:
            raise LengthMismatch(f"expected length {expected}, got {len(cells)}")
    out = []
    for column in zip(*cells_list):
        first = column[0]
        out.append(first if all(c == first for c in column) else WILDCARD)
    return Schema("".join(out))


def is_instance(word, schema):
    """Whether the word belongs to the schema's expansion.

    Character-wise test, equivalent to leq(word, schema); never enumerates.
    """
    cells = _word_cells(word)
    s = as_schema(schema)
    if s.cells is None:
        return False
    _check_lengths(cells, s.cells)
    return all(a == b or b == WILDCARD for a, b in zip(cells, s.cells))


def confidence(schema, words, alphabet):
    """Fraction of the schema's expansion present in the given words.

    Duplicates among ``words`` are ignored (this is a coverage measure of the
    expansion).  Computed by counting matches against the deduplicated words;
    the denominator is ``|alphabet| ** antiorder``, never an enumeration.
    """
    s = as_schema(schema)
    if s.cells is None:
        raise EmptySchema("the empty schema has an empty expansion")
    distinct = {_word_cells(w) for w in words}
    count = 0
    for cells in distinct:
        _check_lengths(cells, s.cells)
        if all(a == b or b == WILDCARD for a, b in zip(cells, s.cells)):
            count += 1
    return count / (len(alphabet) ** s.antiorder())
