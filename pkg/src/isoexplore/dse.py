"""Multi-objective design-space exploration over mapping genotypes.

An elitist evolutionary search (non-dominated sorting plus crowding
distance) minimizes (latency, allocated cores, energy). The archive keeps
every feasible non-dominated mapping seen, not just the final population.
Runs are deterministic for a given seed, independent of evaluator threads.
"""

from __future__ import annotations

import hashlib
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from random import Random
from typing import Iterable, Sequence

from .errors import DomainError, NoFeasibleMapping
from .mapping import (
    ExplorationMode,
    Genotype,
    MappingResult,
    decode,
    random_genotype,
)
from .model import ProblemSpec

Vector = tuple[float, ...]


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """True if a is at least as good everywhere and better somewhere (min)."""
    better = False
    for x, y in zip(a, b):
        if x > y:
            return False
        if x < y:
            better = True
    return better


def nondominated(vectors: Iterable[Vector]) -> list[Vector]:
    """Unique mutually non-dominated subset, in first-seen order."""
    out: list[Vector] = []
    for v in vectors:
        if any(dominates(o, v) or o == v for o in out):
            continue
        out = [o for o in out if not dominates(v, o)]
        out.append(v)
    return out


def epsilon_dominance(front: Sequence[Vector], reference: Sequence[Vector]) -> float:
    """Smallest eps in [0, 1) such that scaling the front by (1 - eps)
    covers every reference point in every objective."""
    if not front or not reference:
        raise DomainError("epsilon_dominance needs non-empty fronts")
    for v in (*front, *reference):
        if any(x <= 0 for x in v):
            raise DomainError(f"objective vector {v} has a non-positive value")
    eps = 0.0
    for s in reference:
        best = min(
            max((1.0 - so / fo) for so, fo in zip(s, f))
            for f in front
        )
        eps = max(eps, best)
    return max(0.0, eps)


class ParetoArchive:
    """Feasible, mutually non-dominated mappings with unique objectives."""

    def __init__(self):
        self.entries: list[MappingResult] = []

    def add(self, mapping: MappingResult) -> bool:
        if not mapping.feasible or mapping.objectives is None:
            return False
        v = mapping.objectives
        for e in self.entries:
            if e.objectives == v or dominates(e.objectives, v):
                return False
        self.entries = [e for e in self.entries if not dominates(v, e.objectives)]
        self.entries.append(mapping)
        return True

    def vectors(self) -> list[Vector]:
        return [e.objectives for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def derive_seed(*parts) -> int:
    """Stable sub-seed from arbitrary labels (independent of hash order)."""
    digest = hashlib.sha256(":".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big")


# ----------------------------------------------------------------- selection


def _fast_nondominated_sort(vectors: list[Vector]) -> list[list[int]]:
    n = len(vectors)
    dominated_by: list[list[int]] = [[] for _ in range(n)]
    counts = [0] * n
    fronts: list[list[int]] = [[]]
    for i in range(n):
        for j in range(i + 1, n):
            if dominates(vectors[i], vectors[j]):
                dominated_by[i].append(j)
                counts[j] += 1
            elif dominates(vectors[j], vectors[i]):
                dominated_by[j].append(i)
                counts[i] += 1
    for i in range(n):
        if counts[i] == 0:
            fronts[0].append(i)
    k = 0
    while fronts[k]:
        nxt: list[int] = []
        for i in fronts[k]:
            for j in dominated_by[i]:
                counts[j] -= 1
                if counts[j] == 0:
                    nxt.append(j)
        fronts.append(nxt)
        k += 1
    return fronts[:-1]


def _crowding(vectors: list[Vector], front: list[int]) -> dict[int, float]:
    dist = {i: 0.0 for i in front}
    if len(front) <= 2:
        return {i: float("inf") for i in front}
    m = len(vectors[front[0]])
    for o in range(m):
        ordered = sorted(front, key=lambda i: vectors[i][o])
        lo, hi = vectors[ordered[0]][o], vectors[ordered[-1]][o]
        dist[ordered[0]] = dist[ordered[-1]] = float("inf")
        if hi == lo:
            continue
        for a, b, c in zip(ordered, ordered[1:], ordered[2:]):
            dist[b] += (vectors[c][o] - vectors[a][o]) / (hi - lo)
    return dist


@dataclass
class _Individual:
    genotype: Genotype
    mapping: MappingResult
    rank: int = 0
    crowding: float = 0.0

    @property
    def sort_key(self):
        return (self.rank, -self.crowding, self.mapping.digest)


def _rank_population(pop: list[_Individual]) -> None:
    feasible = [i for i, ind in enumerate(pop) if ind.mapping.feasible]
    infeasible = [i for i, ind in enumerate(pop) if not ind.mapping.feasible]
    vectors = [pop[i].mapping.objectives for i in feasible]
    fronts = _fast_nondominated_sort(vectors) if vectors else []
    for rank, front in enumerate(fronts):
        crowd = _crowding(vectors, front)
        for local in front:
            ind = pop[feasible[local]]
            ind.rank = rank
            ind.crowding = crowd[local]
    tail_rank = len(fronts)
    for i in infeasible:
        pop[i].rank = tail_rank
        pop[i].crowding = 0.0


def _select(pop: list[_Individual], size: int) -> list[_Individual]:
    return sorted(pop, key=lambda ind: ind.sort_key)[:size]


def _tournament(pop: list[_Individual], rng: Random) -> _Individual:
    a, b = rng.randrange(len(pop)), rng.randrange(len(pop))
    return min(pop[a], pop[b], key=lambda ind: ind.sort_key)


def _cross_and_mutate(
    spec: ProblemSpec, a: Genotype, b: Genotype, rng: Random
) -> Genotype:
    tasks = spec.application.tasks
    bindings = tuple(
        (x if rng.random() < 0.5 else y) for x, y in zip(a.bindings, b.bindings)
    )
    core_flags = tuple(
        (x if rng.random() < 0.5 else y) for x, y in zip(a.core_flags, b.core_flags)
    )
    tile_flags = tuple(
        (x if rng.random() < 0.5 else y) for x, y in zip(a.tile_flags, b.tile_flags)
    )
    length = len(bindings) + len(core_flags) + len(tile_flags)
    p = 1.0 / length
    bindings = tuple(
        rng.randrange(len(spec.edges_of[tasks[i].id])) if rng.random() < p else g
        for i, g in enumerate(bindings)
    )
    core_flags = tuple((1 - g) if rng.random() < p else g for g in core_flags)
    tile_flags = tuple((1 - g) if rng.random() < p else g for g in tile_flags)
    return Genotype(bindings, core_flags, tile_flags)


# ------------------------------------------------------------------- explore


@dataclass
class ExploreResult:
    mode: ExplorationMode
    seed: int
    archive: ParetoArchive
    trace: list[dict] = field(default_factory=list)
    evaluations: int = 0
    wallclock_s: float = 0.0


def _thread_count(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("ISOEXPLORE_THREADS", "1"))
    return max(1, threads)


def explore(
    spec: ProblemSpec,
    mode: ExplorationMode = ExplorationMode.ISOLATION_AWARE,
    seed: int = 0,
    iterations: int = 200,
    population: int = 100,
    offspring: int = 25,
    threads: int | None = None,
) -> ExploreResult:
    """Evolve mappings under one mode; returns the archive plus a trace of
    archive quality (eps against the final archive) per iteration."""
    rng = Random(derive_seed(seed, mode.value, "explore"))
    workers = _thread_count(threads)
    started = time.perf_counter()

    def evaluate(genotypes: list[Genotype]) -> list[MappingResult]:
        if workers == 1 or len(genotypes) <= 1:
            return [decode(spec, g, mode) for g in genotypes]
        with ThreadPoolExecutor(max_workers=min(workers, len(genotypes))) as pool:
            return list(pool.map(lambda g: decode(spec, g, mode), genotypes))

    archive = ParetoArchive()
    snapshots: list[tuple[int, float, list[Vector]]] = []
    genotypes = [random_genotype(spec, rng) for _ in range(population)]
    pop = [_Individual(g, m) for g, m in zip(genotypes, evaluate(genotypes))]
    for ind in pop:
        archive.add(ind.mapping)
    _rank_population(pop)
    evaluations = population
    snapshots.append((0, time.perf_counter() - started, archive.vectors()))

    for it in range(1, iterations + 1):
        children = [
            _cross_and_mutate(
                spec, _tournament(pop, rng).genotype, _tournament(pop, rng).genotype, rng
            )
            for _ in range(offspring)
        ]
        results = evaluate(children)
        evaluations += len(children)
        for g, m in zip(children, results):
            pop.append(_Individual(g, m))
            archive.add(m)
        _rank_population(pop)
        pop = _select(pop, population)
        snapshots.append((it, time.perf_counter() - started, archive.vectors()))

    if not len(archive):
        raise NoFeasibleMapping(
            f"{mode.value}: no feasible mapping in {evaluations} evaluations"
        )

    final = archive.vectors()
    trace = [
        {
            "iteration": it,
            "elapsed_s": elapsed,
            "epsilon": 1.0 if not vecs else epsilon_dominance(vecs, final),
            "archive_size": len(vecs),
        }
        for it, elapsed, vecs in snapshots
    ]
    return ExploreResult(
        mode=mode,
        seed=seed,
        archive=archive,
        trace=trace,
        evaluations=evaluations,
        wallclock_s=time.perf_counter() - started,
    )


# ------------------------------------------------------------------- compare


@dataclass
class ComparisonResult:
    modes: tuple[ExplorationMode, ...]
    repetitions: int
    epsilon: dict[str, list[float]]          # mode value -> eps per repetition
    mean_epsilon: dict[str, float]
    fronts: dict[tuple[str, int], list[Vector]]
    references: dict[int, list[Vector]]


def compare_approaches(
    spec: ProblemSpec,
    seed: int = 0,
    repetitions: int = 5,
    iterations: int = 200,
    population: int = 100,
    offspring: int = 25,
    threads: int | None = None,
) -> ComparisonResult:
    """Run all modes per repetition; score each archive against the
    repetition's union reference front with the eps indicator."""
    modes = tuple(ExplorationMode)
    epsilon: dict[str, list[float]] = {m.value: [] for m in modes}
    fronts: dict[tuple[str, int], list[Vector]] = {}
    references: dict[int, list[Vector]] = {}
    for rep in range(repetitions):
        rep_fronts: dict[str, list[Vector]] = {}
        for mode in modes:
            res = explore(
                spec, mode,
                seed=derive_seed(seed, mode.value, rep),
                iterations=iterations,
                population=population,
                offspring=offspring,
                threads=threads,
            )
            rep_fronts[mode.value] = res.archive.vectors()
            fronts[(mode.value, rep)] = rep_fronts[mode.value]
        union = [v for vecs in rep_fronts.values() for v in vecs]
        reference = nondominated(union)
        references[rep] = reference
        for mode in modes:
            epsilon[mode.value].append(
                epsilon_dominance(rep_fronts[mode.value], reference)
            )
    mean = {m: sum(v) / len(v) for m, v in epsilon.items()}
    return ComparisonResult(
        modes=modes,
        repetitions=repetitions,
        epsilon=epsilon,
        mean_epsilon=mean,
        fronts=fronts,
        references=references,
    )
