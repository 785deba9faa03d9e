"""Schema lattices sampled by genetic-algorithm populations.

Compute the schematic completion of a population (every schema it samples),
work with the resulting complete lattice, and run the building-block
experiments on top of a canonical GA.
"""

from ._backend import backend_name
from .errors import (
    BudgetExceeded,
    ElementNotInLattice,
    EmptyPopulation,
    EmptySchema,
    InvalidSymbol,
    LengthMismatch,
    NoInstances,
    NonBinaryWord,
    NotAWord,
    SchemaError,
    TooManyCutPoints,
    UndefinedDefiningLength,
)
from .schema import (
    EMPTY,
    WILDCARD,
    Alphabet,
    Schema,
    as_schema,
    blend,
    compress,
    confidence,
    expand,
    infer_alphabet,
    is_instance,
    join,
    leq,
)
from .lattice import (
    LatticeMarking,
    SchematicLattice,
    blend_closure,
    complete,
    full_space,
    mark_reachability,
    to_dot,
)
from .ga import (
    GAConfig,
    Population,
    RunTrace,
    crossover_kpoint,
    crossover_probabilistic,
    crossover_uniform,
    fitness_onemax,
    mutate,
    roulette_select,
    run,
    step,
)
from .analysis import (
    BuildingBlockReport,
    SchemaStats,
    blend_combination_fraction,
    building_blocks,
    experiment_crossover,
    experiment_order_dl,
    schema_fitness,
    schema_stats_for,
    track_building_blocks,
)

__version__ = "0.1.0"
