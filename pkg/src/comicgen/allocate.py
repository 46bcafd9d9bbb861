"""Panel-count allocation across pages.

Minimizes the five-term weighted objective (bound penalties, count
conservation, uniformity of per-page peak importance, split semantic
relations) with a seeded genetic algorithm; a bounded exhaustive search
serves as the optimality oracle.  Keyframes are always assigned to pages
contiguously in story order, so only the per-page counts are optimized.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .errors import Infeasible, LengthMismatch, TooLarge

DEFAULT_ALPHA = (3.0, 3.0, 2.0, 1.0, 1.0)
DEFAULT_N_MAX = 9
DEFAULT_N_MIN = 2


@dataclass(frozen=True)
class AllocationParams:
    alpha: tuple[float, float, float, float, float] = DEFAULT_ALPHA
    n_max: int = DEFAULT_N_MAX
    n_min: int = DEFAULT_N_MIN
    pages: int = 1
    penalty_mode: str = "hinge"  # "hinge" | "absolute"
    importance_mode: str = "score"  # "score" | "rank"

    def __post_init__(self):
        if len(self.alpha) != 5 or any(a < 0 for a in self.alpha):
            raise ValueError("alpha must be five non-negative weights")
        if not (1 <= self.n_min <= self.n_max):
            raise ValueError("need 1 <= n_min <= n_max")
        if self.pages < 1:
            raise ValueError("pages must be >= 1")
        if self.penalty_mode not in ("hinge", "absolute"):
            raise ValueError("penalty_mode must be hinge or absolute")


@dataclass(frozen=True)
class GaConfig:
    population: int = 100
    generations: int = 500
    crossover_rate: float = 0.9
    mutation_rate: float = 0.2
    elitism: int = 2
    seed: int = 0
    stagnation_limit: int = 50

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be >= 2")
        if not (0 <= self.elitism < self.population):
            raise ValueError("elitism must be < population")


@dataclass(frozen=True)
class ObjectiveBreakdown:
    over_max: float
    under_min: float
    count_mismatch: float
    uniformity: float
    split_relations: float

    @property
    def total(self) -> float:
        return (
            self.over_max
            + self.under_min
            + self.count_mismatch
            + self.uniformity
            + self.split_relations
        )


@dataclass(frozen=True)
class PageAllocation:
    counts: tuple[int, ...]
    assignment: tuple[tuple[int, ...], ...]
    z: float
    breakdown: ObjectiveBreakdown = field(
        default=ObjectiveBreakdown(0.0, 0.0, 0.0, 0.0, 0.0)
    )


def _population_std(values: list[float]) -> float:
    m = len(values)
    if m == 0:
        return 0.0
    mean = sum(values) / m
    return math.sqrt(sum((v - mean) ** 2 for v in values) / m)


def objective(
    counts: list[int],
    page_max_importance: list[float],
    split_relations: int,
    params: AllocationParams,
    n_total: int,
) -> float:
    return objective_breakdown(
        counts, page_max_importance, split_relations, params, n_total
    ).total


def objective_breakdown(
    counts: list[int],
    page_max_importance: list[float],
    split_relations: int,
    params: AllocationParams,
    n_total: int,
) -> ObjectiveBreakdown:
    """Five-term weighted cost of a candidate per-page count vector.

    Hinge mode penalizes only bound violations; absolute mode charges
    |n_i - N_max| + |n_i - N_min| for every page, as the formula in the
    source reads literally.
    """
    if len(counts) != params.pages:
        raise LengthMismatch(f"expected {params.pages} counts, got {len(counts)}")
    if len(page_max_importance) != params.pages:
        raise LengthMismatch("page_max_importance length must equal pages")
    a1, a2, a3, a4, a5 = params.alpha
    if params.penalty_mode == "hinge":
        over = sum(max(0, n - params.n_max) for n in counts)
        under = sum(max(0, params.n_min - n) for n in counts)
    else:
        over = sum(abs(n - params.n_max) for n in counts)
        under = sum(abs(n - params.n_min) for n in counts)
    return ObjectiveBreakdown(
        over_max=a1 * over,
        under_min=a2 * under,
        count_mismatch=a3 * abs(sum(counts) - n_total),
        uniformity=a4 * _population_std(page_max_importance),
        split_relations=a5 * split_relations,
    )


def contiguous_assignment(counts: list[int], n_total: int) -> tuple[tuple[int, ...], ...]:
    """Slice 0..n_total-1 into per-page runs of the given sizes.

    Tolerates count vectors that do not sum to n_total (needed while the
    GA evolves infeasible chromosomes): slices are truncated at the end.
    """
    pages = []
    cursor = 0
    for n in counts:
        take = max(0, min(n, n_total - cursor))
        pages.append(tuple(range(cursor, cursor + take)))
        cursor += take
    return tuple(pages)


def count_split_relations(
    assignment: tuple[tuple[int, ...], ...], relation_groups: list[list[int]]
) -> int:
    """Unordered pairs of related keyframes that land on different pages."""
    page_of: dict[int, int] = {}
    for p, members in enumerate(assignment):
        for k in members:
            page_of[k] = p
    total = 0
    for group in relation_groups:
        placed = [page_of[k] for k in group if k in page_of]
        for i in range(len(placed)):
            for j in range(i + 1, len(placed)):
                if placed[i] != placed[j]:
                    total += 1
    return total


def _evaluate(
    counts: tuple[int, ...],
    importance: list[float],
    relation_groups: list[list[int]],
    params: AllocationParams,
    n_total: int,
) -> ObjectiveBreakdown:
    assignment = contiguous_assignment(list(counts), n_total)
    page_max = [max((importance[k] for k in page), default=0.0) for page in assignment]
    split = count_split_relations(assignment, relation_groups)
    return objective_breakdown(list(counts), page_max, split, params, n_total)


def _check_feasible(n_total: int, params: AllocationParams) -> None:
    m = params.pages
    if n_total > m * params.n_max or n_total < m * params.n_min:
        raise Infeasible(
            f"{n_total} panels cannot fill {m} pages with "
            f"{params.n_min}..{params.n_max} panels per page"
        )


def repair_counts(counts: list[int], n_total: int, params: AllocationParams) -> list[int]:
    """Force bounds and exact sum, spreading the residual greedily over the
    pages with the most slack (earliest page wins ties)."""
    fixed = [min(params.n_max, max(params.n_min, n)) for n in counts]
    delta = n_total - sum(fixed)
    while delta != 0:
        if delta > 0:
            candidates = [i for i in range(len(fixed)) if fixed[i] < params.n_max]
            if not candidates:
                raise Infeasible("cannot repair counts up to the requested total")
            best = max(candidates, key=lambda i: (params.n_max - fixed[i], -i))
            fixed[best] += 1
            delta -= 1
        else:
            candidates = [i for i in range(len(fixed)) if fixed[i] > params.n_min]
            if not candidates:
                raise Infeasible("cannot repair counts down to the requested total")
            best = max(candidates, key=lambda i: (fixed[i] - params.n_min, -i))
            fixed[best] -= 1
            delta += 1
    return fixed


def ga_allocate(
    n_total: int,
    importance_scores: list[float],
    relation_groups: list[list[int]],
    params: AllocationParams,
    ga_config: GaConfig = GaConfig(),
) -> PageAllocation:
    """Genetic search over per-page panel counts.

    Chromosome = the count vector; tournament selection of size 3,
    one-point crossover, +-1 mutation on one gene, elitism, early stop on
    stagnation.  The best chromosome is repaired to exact feasibility at
    the end.  Fully deterministic for a given seed.
    """
    m = params.pages
    if n_total < m:
        raise Infeasible(f"{n_total} keyframes cannot fill {m} pages")
    _check_feasible(n_total, params)
    importance = _importance_vector(importance_scores, params)

    rng = random.Random(ga_config.seed)
    cache: dict[tuple[int, ...], float] = {}

    def fitness(chrom: tuple[int, ...]) -> float:
        z = cache.get(chrom)
        if z is None:
            z = _evaluate(chrom, importance, relation_groups, params, n_total).total
            cache[chrom] = z
        return z

    population: list[tuple[int, ...]] = []
    for _ in range(ga_config.population):
        genes = [rng.randint(params.n_min, params.n_max) for _ in range(m)]
        fix = rng.randrange(m)
        genes[fix] = max(1, genes[fix] + (n_total - sum(genes)))
        population.append(tuple(genes))

    best = min(population, key=fitness)
    stagnant = 0
    for _ in range(ga_config.generations):
        scored = sorted(population, key=fitness)
        next_pop = scored[: ga_config.elitism]
        while len(next_pop) < ga_config.population:
            pa = min(rng.sample(population, 3), key=fitness)
            pb = min(rng.sample(population, 3), key=fitness)
            child = list(pa)
            if m > 1 and rng.random() < ga_config.crossover_rate:
                cut = rng.randrange(1, m)
                child = list(pa[:cut] + pb[cut:])
            if rng.random() < ga_config.mutation_rate:
                gene = rng.randrange(m)
                child[gene] = max(1, child[gene] + rng.choice((-1, 1)))
            next_pop.append(tuple(child))
        population = next_pop
        gen_best = min(population, key=fitness)
        if fitness(gen_best) < fitness(best):
            best = gen_best
            stagnant = 0
        else:
            stagnant += 1
            if stagnant >= ga_config.stagnation_limit:
                break

    final = repair_counts(list(best), n_total, params)
    assignment = contiguous_assignment(final, n_total)
    breakdown = _evaluate(tuple(final), importance, relation_groups, params, n_total)
    return PageAllocation(tuple(final), assignment, breakdown.total, breakdown)


def brute_force_allocate(
    n_total: int,
    importance_scores: list[float],
    relation_groups: list[list[int]],
    params: AllocationParams,
    limit: int = 10**6,
) -> PageAllocation:
    """Exhaustive oracle over all bounded compositions of n_total.

    Ties break toward the lexicographically smallest count vector.
    """
    m = params.pages
    _check_feasible(n_total, params)
    if _composition_count(n_total, m, params.n_min, params.n_max) > limit:
        raise TooLarge(f"more than {limit} compositions to enumerate")
    importance = _importance_vector(importance_scores, params)

    best: tuple[int, ...] | None = None
    best_z = math.inf
    for counts in _compositions(n_total, m, params.n_min, params.n_max):
        z = _evaluate(counts, importance, relation_groups, params, n_total).total
        if z < best_z or (z == best_z and (best is None or counts < best)):
            best, best_z = counts, z
    if best is None:
        raise Infeasible("no feasible composition exists")
    assignment = contiguous_assignment(list(best), n_total)
    breakdown = _evaluate(best, importance, relation_groups, params, n_total)
    return PageAllocation(best, assignment, breakdown.total, breakdown)


def _importance_vector(scores: list[float], params: AllocationParams) -> list[float]:
    if params.importance_mode == "score":
        return list(scores)
    from .semantics import quantize_rank

    return [float(r) for r in quantize_rank(list(scores))]


def _compositions(total: int, parts: int, lo: int, hi: int):
    if parts == 1:
        if lo <= total <= hi:
            yield (total,)
        return
    for head in range(lo, hi + 1):
        rest = total - head
        if rest < lo * (parts - 1) or rest > hi * (parts - 1):
            continue
        for tail in _compositions(rest, parts - 1, lo, hi):
            yield (head,) + tail


def _composition_count(total: int, parts: int, lo: int, hi: int) -> int:
    counts = {0: 1}
    for _ in range(parts):
        nxt: dict[int, int] = {}
        for acc, ways in counts.items():
            for v in range(lo, hi + 1):
                if acc + v <= total:
                    nxt[acc + v] = nxt.get(acc + v, 0) + ways
        counts = nxt
    return counts.get(total, 0)
