"""Canonical generational GA on fixed-length words.

Roulette-wheel selection, the k-point / uniform / fitness-weighted crossover
family, per-symbol mutation, and a run loop that always executes to its
generation cap while recording every population.  Every stochastic operation
is a deterministic function of its inputs and the generator passed in, so a
run is reproducible from its seed.
"""

import random
import statistics
from dataclasses import dataclass, field

from .errors import LengthMismatch, NonBinaryWord, TooManyCutPoints
from .schema import Alphabet

BINARY = Alphabet.binary()


def fitness_onemax(word):
    """Number of '1' symbols in a binary word."""
    ones = word.count("1")
    if ones + word.count("0") != len(word):
        raise NonBinaryWord(f"not a binary word: {word!r}")
    return ones


@dataclass(frozen=True)
class FitnessFunction:
    """A named fitness function plus the optimum it can reach per length."""

    name: str
    evaluate: callable
    optimum: callable


FITNESS_FUNCTIONS = {
    "onemax": FitnessFunction("onemax", fitness_onemax, lambda length: length),
}


def get_fitness(name):
    try:
        return FITNESS_FUNCTIONS[name]
    except KeyError:
        raise ValueError(f"unknown fitness function: {name!r}") from None


def parse_crossover(name):
    """Normalize a crossover method name to (kind, k).

    Accepts 'k-point' for any k >= 1, 'UX'/'uniform' and 'PX'/'probabilistic'
    in any case.
    """
    token = name.strip().lower()
    if token in ("ux", "uniform"):
        return "uniform", 0
    if token in ("px", "probabilistic"):
        return "probabilistic", 0
    if token.endswith("-point"):
        head = token[: -len("-point")]
        if head.isdigit() and int(head) >= 1:
            return "kpoint", int(head)
    raise ValueError(f"unknown crossover method: {name!r}")


def canonical_crossover_name(name):
    """The display form used in CSV output: '3-point', 'UX' or 'PX'."""
    kind, k = parse_crossover(name)
    if kind == "kpoint":
        return f"{k}-point"
    return "UX" if kind == "uniform" else "PX"


@dataclass(frozen=True)
class GAConfig:
    """Everything a run needs; immutable and picklable for worker processes."""

    length: int
    population_size: int
    mutation_rate: float = 0.005
    crossover_method: str = "1-point"
    crossover_rate: float = 1.0
    generations: int = 120
    fitness_function: str = "onemax"
    rng_seed: int = 0

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("length must be at least 1")
        if self.population_size < 1:
            raise ValueError("population size must be at least 1")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation rate must be in [0, 1]")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ValueError("crossover rate must be in [0, 1]")
        if self.generations < 1:
            raise ValueError("generation cap must be at least 1")
        get_fitness(self.fitness_function)
        kind, k = parse_crossover(self.crossover_method)
        if kind == "kpoint" and k > self.length - 1:
            raise TooManyCutPoints(
                f"{k} cut points but only {self.length - 1} gaps"
            )


@dataclass(frozen=True)
class Population:
    """One generation: ordered members (duplicates allowed) with cached fitness."""

    members: tuple
    fitnesses: tuple

    @classmethod
    def evaluate(cls, members, fitness_fn):
        members = tuple(members)
        return cls(members, tuple(fitness_fn(m) for m in members))

    @classmethod
    def random(cls, length, size, rng, fitness_fn, alphabet=BINARY):
        members = [
            "".join(rng.choices(alphabet.symbols, k=length)) for _ in range(size)
        ]
        return cls.evaluate(members, fitness_fn)

    def __len__(self):
        return len(self.members)

    def best_fitness(self):
        return max(self.fitnesses)

    def mean_fitness(self):
        return statistics.fmean(self.fitnesses)


def roulette_select(population, rng):
    """Draw a member with probability proportional to fitness.

    A population whose fitness sums to zero falls back to a uniform draw
    (the engine must not divide by zero on pathological populations).
    """
    members = population.members
    fitnesses = population.fitnesses
    total = sum(fitnesses)
    if total <= 0:
        return members[rng.randrange(len(members))]
    pick = rng.random() * total
    acc = 0.0
    for member, fit in zip(members, fitnesses):
        acc += fit
        if pick < acc:
            return member
    return members[-1]


def crossover_kpoint(a, b, k, rng):
    """Cut at k distinct gaps and exchange alternating segments."""
    if len(a) != len(b):
        raise LengthMismatch(f"length {len(a)} vs {len(b)}")
    if not 1 <= k <= len(a) - 1:
        raise TooManyCutPoints(f"k={k} with {len(a) - 1} gaps")
    cuts = sorted(rng.sample(range(1, len(a)), k))
    first = []
    second = []
    swapped = False
    prev = 0
    for cut in cuts + [len(a)]:
        if swapped:
            first.append(b[prev:cut])
            second.append(a[prev:cut])
        else:
            first.append(a[prev:cut])
            second.append(b[prev:cut])
        swapped = not swapped
        prev = cut
    return "".join(first), "".join(second)


def crossover_uniform(a, b, rng):
    """Fair coin per position; the second child takes the complement choices."""
    if len(a) != len(b):
        raise LengthMismatch(f"length {len(a)} vs {len(b)}")
    first = []
    second = []
    for x, y in zip(a, b):
        if rng.random() < 0.5:
            first.append(x)
            second.append(y)
        else:
            first.append(y)
            second.append(x)
    return "".join(first), "".join(second)


def crossover_probabilistic(a, fitness_a, b, fitness_b, rng):
    """Per-position parent choice weighted by parent fitness.

    The first child takes a's symbol with probability fa / (fa + fb), 0.5
    when both fitnesses are zero; the second child takes the other symbol.
    """
    if len(a) != len(b):
        raise LengthMismatch(f"length {len(a)} vs {len(b)}")
    total = fitness_a + fitness_b
    p = 0.5 if total <= 0 else fitness_a / total
    first = []
    second = []
    for x, y in zip(a, b):
        if rng.random() < p:
            first.append(x)
            second.append(y)
        else:
            first.append(y)
            second.append(x)
    return "".join(first), "".join(second)


def mutate(word, rate, rng, alphabet=BINARY):
    """Independently resample each position to a different symbol with
    probability ``rate`` (a bit flip on the binary alphabet)."""
    if rate <= 0:
        return word
    out = list(word)
    for i, c in enumerate(out):
        if rng.random() < rate:
            others = [s for s in alphabet.symbols if s != c]
            out[i] = others[0] if len(others) == 1 else rng.choice(others)
    return "".join(out)


def step(population, config, rng):
    """Produce the next generation.

    Repeatedly draw two parents by roulette (independently; self-pairing is
    allowed), cross them with probability ``crossover_rate``, mutate both
    children, and append — dropping the surplus child when the population
    size is odd.  Generational replacement, no elitism.
    """
    if len(population) != config.population_size:
        raise ValueError(
            f"population size {len(population)} != configured "
            f"{config.population_size}"
        )
    fitness = get_fitness(config.fitness_function)
    kind, k = parse_crossover(config.crossover_method)
    fit_of = dict(zip(population.members, population.fitnesses))
    n = config.population_size
    children = []
    while len(children) < n:
        p1 = roulette_select(population, rng)
        p2 = roulette_select(population, rng)
        if rng.random() < config.crossover_rate:
            if kind == "kpoint":
                c1, c2 = crossover_kpoint(p1, p2, k, rng)
            elif kind == "uniform":
                c1, c2 = crossover_uniform(p1, p2, rng)
            else:
                c1, c2 = crossover_probabilistic(
                    p1, fit_of[p1], p2, fit_of[p2], rng
                )
        else:
            c1, c2 = p1, p2
        children.append(mutate(c1, config.mutation_rate, rng))
        if len(children) < n:
            children.append(mutate(c2, config.mutation_rate, rng))
    return Population.evaluate(children, fitness.evaluate)


@dataclass(frozen=True)
class RunTrace:
    """A full run: every generation's population plus when the optimum appeared.

    ``snapshots[0]`` is the initial population, so there are cap + 1 entries;
    ``generation_found`` is the first snapshot index holding an optimal word,
    or the cap when none ever does (runs never stop early).
    """

    config: GAConfig
    snapshots: tuple
    generation_found: int

    def write_csv(self, stream, seed=None):
        """Per-generation best/mean fitness; '# seed=' header when given."""
        if seed is not None:
            stream.write(f"# seed={seed}\n")
        stream.write("generation,best_fitness,mean_fitness\n")
        for t, pop in enumerate(self.snapshots):
            best = format(pop.best_fitness(), ".6g")
            mean = format(pop.mean_fitness(), ".6g")
            stream.write(f"{t},{best},{mean}\n")

    def write_snapshots(self, stream):
        """One word per line, generations introduced by comment lines."""
        for t, pop in enumerate(self.snapshots):
            stream.write(f"# generation {t}\n")
            for member in pop.members:
                stream.write(member + "\n")


def run(config, rng=None):
    """Run the GA from a fresh uniform-random population to the cap."""
    if rng is None:
        rng = random.Random(config.rng_seed)
    fitness = get_fitness(config.fitness_function)
    target = fitness.optimum(config.length)
    pop = Population.random(
        config.length, config.population_size, rng, fitness.evaluate
    )
    snapshots = [pop]
    for _ in range(config.generations):
        pop = step(pop, config, rng)
        snapshots.append(pop)
    found = config.generations
    for t, snap in enumerate(snapshots):
        if any(f >= target for f in snap.fitnesses):
            found = t
            break
    return RunTrace(config=config, snapshots=tuple(snapshots), generation_found=found)
