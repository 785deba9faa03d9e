"""Building-block extraction and the two experiment drivers.

A building block is a schema of its generation's completion with strictly
below-average order, strictly below-average defining length and strictly
above-average fitness, where the averages run over the completion minus the
empty schema and the population's own words.  The first experiment tracks
how the blocks' average order and defining length move over a run; the
second measures, per crossover method, what fraction of one generation's
blocks is a blend of the previous generation's.

Simulations are independent and run in worker processes when ``jobs`` > 1;
each derives its generator from (master_seed, run_index), so aggregate
results are byte-identical regardless of worker count.
"""

import concurrent.futures
import hashlib
import os
import random
import statistics
from dataclasses import dataclass

from . import _backend
from ._packing import blend_masks, leq_masks, pack_cells, pack_word, unpack_cells
from .errors import BudgetExceeded, NoInstances
from .ga import BINARY, GAConfig, Population, RunTrace, get_fitness, run
from .lattice import complete
from .schema import EMPTY, Schema, as_schema, blend, confidence, is_instance, leq

DEFAULT_ELEMENT_BUDGET = 10 ** 6

DEFAULT_ORDER_DL_CONFIG = GAConfig(
    length=64,
    population_size=30,
    mutation_rate=0.005,
    crossover_method="1-point",
    generations=120,
)

DEFAULT_CROSSOVER_CONFIG = GAConfig(
    length=16,
    population_size=12,
    mutation_rate=0.005,
    generations=120,
)

FIG_METHODS = (
    "1-point", "2-point", "3-point", "4-point", "5-point",
    "6-point", "7-point", "8-point", "9-point", "UX", "PX",
)


def _members_and_fitness(population, fitness_fn=None):
    if isinstance(population, Population):
        return list(population.members), list(population.fitnesses)
    members = list(population)
    if fitness_fn is None:
        fitness_fn = get_fitness("onemax").evaluate
    return members, [fitness_fn(m) for m in members]


def schema_fitness(schema, population, fitness_fn=None):
    """Mean fitness of the population members instancing the schema.

    The population is a multiset: duplicated members count twice, because
    selection pressure acts on copies.
    """
    members, fits = _members_and_fitness(population, fitness_fn)
    s = as_schema(schema)
    values = [f for m, f in zip(members, fits) if is_instance(m, s)]
    if not values:
        raise NoInstances(f"{s} has no instances in the population")
    return statistics.fmean(values)


@dataclass(frozen=True)
class SchemaStats:
    """Scalar properties of one schema within one population."""

    schema: Schema
    order: int
    defining_length: int
    fitness: float
    confidence: float


def schema_stats_for(schema, population, alphabet, fitness_fn=None):
    """Bundle order, defining length, fitness and confidence for a schema.

    Defining length is None for all-wildcard schemata.  Fitness averages the
    population multiset; confidence uses the deduplicated words.
    """
    s = as_schema(schema)
    members, fits = _members_and_fitness(population, fitness_fn)
    dl = s.defining_length() if s.order() else None
    return SchemaStats(
        schema=s,
        order=s.order(),
        defining_length=dl,
        fitness=schema_fitness(s, population, fitness_fn),
        confidence=confidence(s, set(members), alphabet),
    )


def _select_blocks(entries):
    """Pick the strict building blocks out of (order, dl, fitness, handle)
    rows for the eligible elements; dl is -1 for order-0 rows.

    The order and fitness means run over every row; the defining-length mean
    only over rows that have one.  All three comparisons are strict, so an
    all-equal population yields no blocks.
    """
    if not entries:
        return []
    mean_order = statistics.fmean(e[0] for e in entries)
    mean_fit = statistics.fmean(e[2] for e in entries)
    dls = [e[1] for e in entries if e[1] >= 0]
    if not dls:
        return []
    mean_dl = statistics.fmean(dls)
    return [
        handle
        for order, dl, fit, handle in entries
        if dl >= 0 and order < mean_order and dl < mean_dl and fit > mean_fit
    ]


def building_blocks(lattice, population, fitness_fn=None):
    """Building blocks of one generation, given its completion lattice.

    ``lattice`` must be the completion of the deduplicated population.  The
    empty schema and the zero-wildcard elements (the individuals themselves)
    are not eligible and do not enter the averages.
    """
    members, fits = _members_and_fitness(population, fitness_fn)
    if lattice._packed is not None:
        fs, vs = lattice._packed
        zero, one = lattice.alphabet.symbols
        length = lattice.length
        word_vs = [pack_word(w, zero, one) for w in members]
        orders, dls, counts, wsums = _backend.schema_stats(
            fs, vs, word_vs, fits, length
        )
        entries = [
            (orders[i], dls[i], wsums[i] / counts[i], i)
            for i in range(len(fs))
            if orders[i] != length
        ]
        chosen = _select_blocks(entries)
        return frozenset(
            Schema(unpack_cells(fs[i], vs[i], length, zero, one)) for i in chosen
        )

    entries = []
    for s in lattice.elements:
        if s.is_empty or s.is_word:
            continue
        fit = statistics.fmean(
            f for m, f in zip(members, fits) if is_instance(m, s)
        )
        dl = s.defining_length() if s.order() else -1
        entries.append((s.order(), dl, fit, s))
    return frozenset(_select_blocks(entries))


def _in_blend_span(schema, pool, strict):
    """Is ``schema`` the blend of some subset of ``pool``?

    Only pool members above the schema can contribute without conflict, and
    adding members can only shrink a blend, so the schema is a subset blend
    exactly when it equals the blend of everything above it.  ``strict``
    additionally demands two distinct contributors, so a block that merely
    survived does not count.
    """
    above = [t for t in pool if leq(schema, t)]
    if not above or (strict and len(above) < 2):
        return False
    return blend(above) == schema


def blend_combination_fraction(previous, current, strict=False):
    """Share of ``current`` reachable by blending members of ``previous``.

    None when ``current`` is empty.  The blend closure contains every member
    of ``previous`` itself, so blocks surviving unchanged count as combined;
    pass ``strict`` to require genuine two-source blends.
    """
    current = {as_schema(s) for s in current}
    if not current:
        return None
    pool = [as_schema(s) for s in previous]

    # Mask arithmetic when everything fits a two-symbol coding; this runs
    # once per generation pair in the crossover experiment.
    if all(not s.is_empty for s in pool) and all(not s.is_empty for s in current):
        symbols = sorted(
            {c for s in [*pool, *current] for c in s.cells if c != "*"}
        )
        if len(symbols) <= 2:
            fillers = [c for c in "01ab" if c not in symbols]
            zero, one = (symbols + fillers)[:2]
            packed_pool = [pack_cells(s.cells, zero, one) for s in pool]
            hits = 0
            for s in current:
                fk, vk = pack_cells(s.cells, zero, one)
                above = [p for p in packed_pool if leq_masks(fk, vk, p[0], p[1])]
                if not above or (strict and len(above) < 2):
                    continue
                acc = above[0]
                for p in above[1:]:
                    acc = blend_masks(acc[0], acc[1], p[0], p[1])
                    if acc is None:
                        break
                if acc == (fk, vk):
                    hits += 1
            return hits / len(current)

    hits = sum(1 for s in current if _in_blend_span(s, pool, strict))
    return hits / len(current)


@dataclass(frozen=True)
class BuildingBlockReport:
    """One generation's blocks with their summary statistics.

    ``blend_combination_fraction`` is None for generation 0 and for
    generations without blocks; averages are None when there are no blocks.
    """

    generation: int
    blocks: frozenset
    avg_order: float
    avg_defining_length: float
    blend_combination_fraction: float


def track_building_blocks(
    populations,
    alphabet=None,
    max_elements=None,
    strict_blends=False,
    fitness_fn=None,
):
    """Per-generation building-block reports for a run.

    Accepts a RunTrace or any iterable of Population / word sequences.  Each
    generation is completed from scratch; BudgetExceeded propagates when a
    completion outgrows ``max_elements``.
    """
    if isinstance(populations, RunTrace):
        pops = populations.snapshots
        if alphabet is None and populations.config.fitness_function == "onemax":
            alphabet = BINARY
    else:
        pops = list(populations)

    reports = []
    previous = None
    for t, pop in enumerate(pops):
        members, fits = _members_and_fitness(pop, fitness_fn)
        lattice = complete(members, alphabet, max_elements=max_elements)
        blocks = building_blocks(lattice, pop, fitness_fn)
        if blocks:
            avg_order = statistics.fmean(s.order() for s in blocks)
            avg_dl = statistics.fmean(s.defining_length() for s in blocks)
        else:
            avg_order = avg_dl = None
        fraction = None
        if t > 0:
            fraction = blend_combination_fraction(previous, blocks, strict_blends)
        reports.append(
            BuildingBlockReport(
                generation=t,
                blocks=blocks,
                avg_order=avg_order,
                avg_defining_length=avg_dl,
                blend_combination_fraction=fraction,
            )
        )
        previous = blocks
    return reports


def derive_rng(master_seed, index):
    """Deterministic per-run generator, stable across platforms and processes."""
    digest = hashlib.sha256(f"{master_seed}:{index}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _fmt(value):
    return "nan" if value is None else format(value, ".6g")


def _run_tasks(worker, tasks, jobs):
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs <= 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    chunk = max(1, len(tasks) // (jobs * 4))
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, tasks, chunksize=chunk))


def _order_dl_sim(args):
    config, master_seed, index, max_elements, collect = args
    trace = run(config, derive_rng(master_seed, index))
    try:
        reports = track_building_blocks(trace, max_elements=max_elements)
    except BudgetExceeded:
        return index, None, None
    samples = [
        (r.generation, r.avg_order, r.avg_defining_length)
        for r in reports
        if r.blocks
    ]
    listing = None
    if collect:
        listing = [sorted(str(s) for s in r.blocks) for r in reports]
    return index, samples, listing


@dataclass(frozen=True)
class GenerationRow:
    """Across-simulation averages for one generation (None when no sample)."""

    generation: int
    mean_avg_order: float
    sd_avg_order: float
    mean_avg_dl: float
    sd_avg_dl: float
    n_samples: int


@dataclass(frozen=True)
class OrderDlResult:
    config: GAConfig
    n_sims: int
    master_seed: int
    rows: tuple
    excluded_runs: tuple
    block_listings: tuple

    def write_csv(self, stream):
        stream.write(f"# seed={self.master_seed}\n")
        if self.excluded_runs:
            joined = " ".join(str(i) for i in self.excluded_runs)
            stream.write(f"# excluded_runs={joined}\n")
        stream.write("generation,mean_avg_order,mean_avg_dl,n_samples\n")
        for row in self.rows:
            stream.write(
                f"{row.generation},{_fmt(row.mean_avg_order)},"
                f"{_fmt(row.mean_avg_dl)},{row.n_samples}\n"
            )


def experiment_order_dl(
    config=DEFAULT_ORDER_DL_CONFIG,
    n_sims=20,
    master_seed=0,
    jobs=None,
    max_elements=DEFAULT_ELEMENT_BUDGET,
    collect_blocks=False,
):
    """Average building-block order and defining length per generation.

    Generations without blocks contribute no sample (n_samples says how many
    simulations did); runs whose completion outgrows the element budget are
    excluded entirely and reported.
    """
    tasks = [
        (config, master_seed, i, max_elements, collect_blocks)
        for i in range(n_sims)
    ]
    results = _run_tasks(_order_dl_sim, tasks, jobs)

    per_gen = {t: ([], []) for t in range(config.generations + 1)}
    excluded = []
    listings = []
    for index, samples, listing in results:
        if samples is None:
            excluded.append(index)
            continue
        if listing is not None:
            listings.append(listing)
        for generation, avg_order, avg_dl in samples:
            per_gen[generation][0].append(avg_order)
            per_gen[generation][1].append(avg_dl)

    rows = []
    for t in range(config.generations + 1):
        orders, dls = per_gen[t]
        if orders:
            rows.append(
                GenerationRow(
                    generation=t,
                    mean_avg_order=statistics.fmean(orders),
                    sd_avg_order=statistics.pstdev(orders),
                    mean_avg_dl=statistics.fmean(dls),
                    sd_avg_dl=statistics.pstdev(dls),
                    n_samples=len(orders),
                )
            )
        else:
            rows.append(
                GenerationRow(
                    generation=t,
                    mean_avg_order=None,
                    sd_avg_order=None,
                    mean_avg_dl=None,
                    sd_avg_dl=None,
                    n_samples=0,
                )
            )
    return OrderDlResult(
        config=config,
        n_sims=n_sims,
        master_seed=master_seed,
        rows=tuple(rows),
        excluded_runs=tuple(excluded),
        block_listings=tuple(listings),
    )


def _crossover_sim(args):
    config, master_seed, index, max_elements, strict = args
    trace = run(config, derive_rng(master_seed, index))
    try:
        reports = track_building_blocks(
            trace, max_elements=max_elements, strict_blends=strict
        )
    except BudgetExceeded:
        return index, None, None
    fractions = [
        r.blend_combination_fraction
        for r in reports[1:]
        if r.blend_combination_fraction is not None
    ]
    mean_fraction = statistics.fmean(fractions) if fractions else None
    return index, trace.generation_found, mean_fraction


@dataclass(frozen=True)
class MethodRow:
    """Fig-10-style summary for one crossover method."""

    method: str
    mean_gen_found: float
    sd_gen_found: float
    mean_bb_combined: float
    sd_bb_combined: float


@dataclass(frozen=True)
class CrossoverResult:
    config: GAConfig
    n_sims: int
    master_seed: int
    rows: tuple
    excluded_runs: tuple

    def write_csv(self, stream):
        stream.write(f"# seed={self.master_seed}\n")
        if self.excluded_runs:
            joined = " ".join(str(i) for i in self.excluded_runs)
            stream.write(f"# excluded_runs={joined}\n")
        stream.write(
            "method,mean_gen_found,sd_gen_found,mean_bb_combined,sd_bb_combined\n"
        )
        for row in self.rows:
            stream.write(
                f"{row.method},{_fmt(row.mean_gen_found)},{_fmt(row.sd_gen_found)},"
                f"{_fmt(row.mean_bb_combined)},{_fmt(row.sd_bb_combined)}\n"
            )


def experiment_crossover(
    methods=FIG_METHODS,
    config=DEFAULT_CROSSOVER_CONFIG,
    n_sims=100,
    master_seed=0,
    jobs=None,
    max_elements=DEFAULT_ELEMENT_BUDGET,
    strict_blends=False,
):
    """Compare crossover methods on solution time and block combination.

    Per run, the blend-combination fractions of consecutive generation pairs
    are averaged (pairs whose current generation has no blocks are skipped);
    per method, means and population standard deviations run over the
    simulations.  Run index i of method m uses run_index m * n_sims + i, so
    the output is independent of scheduling and worker count.
    """
    from .ga import canonical_crossover_name

    tasks = []
    names = []
    for m_idx, method in enumerate(methods):
        names.append(canonical_crossover_name(method))
        method_config = GAConfig(
            length=config.length,
            population_size=config.population_size,
            mutation_rate=config.mutation_rate,
            crossover_method=method,
            crossover_rate=config.crossover_rate,
            generations=config.generations,
            fitness_function=config.fitness_function,
            rng_seed=config.rng_seed,
        )
        for i in range(n_sims):
            tasks.append(
                (method_config, master_seed, m_idx * n_sims + i, max_elements, strict_blends)
            )
    results = _run_tasks(_crossover_sim, tasks, jobs)

    rows = []
    excluded = []
    for m_idx, name in enumerate(names):
        found = []
        fractions = []
        for index, gen_found, mean_fraction in results[
            m_idx * n_sims : (m_idx + 1) * n_sims
        ]:
            if gen_found is None:
                excluded.append(index)
                continue
            found.append(gen_found)
            if mean_fraction is not None:
                fractions.append(mean_fraction)
        rows.append(
            MethodRow(
                method=name,
                mean_gen_found=statistics.fmean(found) if found else None,
                sd_gen_found=statistics.pstdev(found) if found else None,
                mean_bb_combined=statistics.fmean(fractions) if fractions else None,
                sd_bb_combined=statistics.pstdev(fractions) if fractions else None,
            )
        )
    return CrossoverResult(
        config=config,
        n_sims=n_sims,
        master_seed=master_seed,
        rows=tuple(rows),
        excluded_runs=tuple(excluded),
    )
