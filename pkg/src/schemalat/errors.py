"""Exception types shared across the package."""


class SchemaError(Exception):
    """Base class for every domain error raised by schemalat."""


class LengthMismatch(SchemaError):
    """Operands do not share the required length."""


class InvalidSymbol(SchemaError):
    """A symbol outside the alphabet (plus the wildcard) was encountered."""


class NotAWord(SchemaError):
    """A fully fixed word was required but the value has wildcards."""


class EmptySchema(SchemaError):
    """The empty schema is not valid input here."""


class UndefinedDefiningLength(SchemaError):
    """Defining length only exists for schemata with a fixed symbol."""


class BudgetExceeded(SchemaError):
    """An enumeration or completion would exceed the configured budget."""


class EmptyPopulation(SchemaError):
    """At least one word is required."""


class ElementNotInLattice(SchemaError):
    """A schema is not an element of the given lattice."""


class NonBinaryWord(SchemaError):
    """A binary word was required."""


class TooManyCutPoints(SchemaError):
    """More crossover cut points than gaps between symbols."""


class NoInstances(SchemaError):
    """The schema has no instances in the population."""
