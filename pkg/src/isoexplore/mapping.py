"""Mapping decode: from a genotype (or explicit bindings) to a fully
analyzed mapping with budgets, tuples, timing and objectives.

Isolation follows from where tasks land and which flags are set: a task on
any core of a reserved tile gets the whole tile exclusively; a reserved core
on a shared tile is exclusive to its tasks; anything else shares its core.
Flags of cores and tiles that host nothing are masked out.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from random import Random
from typing import Mapping as TMapping
from typing import Sequence

from . import scheduling, timing
from .errors import Infeasible, MissingCoefficient, ValidationError
from .model import Message, NocConfig, ProblemSpec
from .scheduling import BudgetAssignment, InstanceKey, TupleSet


class IsolationScheme(IntEnum):
    CORE_SHARING = 0
    CORE_RESERVATION = 1
    TILE_RESERVATION = 2

    @property
    def short(self) -> str:
        return ("CS", "CR", "TR")[int(self)]


class ExplorationMode(Enum):
    ISOLATION_AWARE = "IsolationAware"
    FIXED_CS = "FixedCS"
    FIXED_CR = "FixedCR"
    FIXED_TR = "FixedTR"


@dataclass(frozen=True)
class Genotype:
    """Per-task edge index plus one reservation bit per core and per tile."""

    bindings: tuple[int, ...]
    core_flags: tuple[int, ...]
    tile_flags: tuple[int, ...]


def random_genotype(spec: ProblemSpec, rng: Random) -> Genotype:
    return Genotype(
        bindings=tuple(
            rng.randrange(len(spec.edges_of[t.id])) for t in spec.application.tasks
        ),
        core_flags=tuple(rng.randrange(2) for _ in spec.architecture.cores),
        tile_flags=tuple(rng.randrange(2) for _ in spec.architecture.tiles),
    )


def xy_route(src_pos: tuple[int, int], dst_pos: tuple[int, int]) -> tuple[str, ...]:
    """Dimension-ordered route: X first, then Y, as directed link ids."""
    links: list[str] = []
    x, y = src_pos
    dx, dy = dst_pos
    while x != dx:
        nx = x + (1 if dx > x else -1)
        links.append(f"{x},{y}->{nx},{y}")
        x = nx
    while y != dy:
        ny = y + (1 if dy > y else -1)
        links.append(f"{x},{y}->{x},{ny}")
        y = ny
    return tuple(links)


@dataclass(frozen=True)
class RoutedInstance:
    """One inter-tile transfer: a message toward one remote consumer."""

    message: Message
    consumer: str
    src_tile: str
    dst_tile: str
    links: tuple[str, ...]
    hops: int

    @property
    def key(self) -> InstanceKey:
        return (self.message.id, self.consumer)


@dataclass
class MappingResult:
    mode: ExplorationMode
    bindings: dict[str, str]
    reserved_cores: frozenset[str]          # effective (masked) core flags
    reserved_tiles: frozenset[str]          # effective (masked) tile flags
    schemes: dict[str, IsolationScheme]     # per hosting core
    instances: tuple[RoutedInstance, ...]
    feasible: bool
    reason: str | None = None
    genotype: Genotype | None = None
    budget: BudgetAssignment | None = None
    tuples: TupleSet | None = None
    task_wcrt: dict[str, int] = field(default_factory=dict)
    task_parts: dict[str, tuple[int, int, int, int]] = field(default_factory=dict)
    transfer_parts: dict[InstanceKey, tuple[int, int, int]] = field(default_factory=dict)
    transfer_wctt: dict[InstanceKey, int] = field(default_factory=dict)
    makespan: int = 0
    throughput: float = 0.0
    objectives: tuple[int, float, float] | None = None  # latency, cores, energy

    @property
    def digest(self) -> str:
        payload = json.dumps(
            {
                "bindings": dict(sorted(self.bindings.items())),
                "cores": sorted(self.reserved_cores),
                "tiles": sorted(self.reserved_tiles),
            },
            sort_keys=True,
        )
        return hashlib.sha1(payload.encode()).hexdigest()[:16]

    def to_doc(self) -> dict:
        doc: dict = {
            "feasible": self.feasible,
            "mode": self.mode.value,
            "digest": self.digest,
            "bindings": dict(self.bindings),
            "core_flags": {
                c: ("reserved" if c in self.reserved_cores else "shared")
                for c in sorted(self.schemes)
            },
            "tile_flags": {
                t: ("reserved" if t in self.reserved_tiles else "shared")
                for t in sorted({tile for tile in self._hosting_tiles()})
            },
            "schemes": {c: s.short for c, s in sorted(self.schemes.items())},
        }
        if not self.feasible:
            doc["reason"] = self.reason
            return doc
        assert self.budget is not None and self.tuples is not None
        key = lambda k: f"{k[0]}->{k[1]}"
        doc["weights"] = {
            "tasks": dict(self.budget.task_weights),
            "transfers": {key(k): w for k, w in self.budget.message_weights.items()},
        }
        doc["routes"] = {key(i.key): list(i.links) for i in self.instances}
        doc["tuples"] = {
            "core": {t: list(v) for t, v in self.tuples.core.items()},
            "core_bus": {c: list(v) for c, v in self.tuples.core_bus.items()},
            "tx_bus": {t: list(v) for t, v in self.tuples.tx_bus.items()},
            "rx_bus": {t: list(v) for t, v in self.tuples.rx_bus.items()},
            "tx": {key(k): list(v) for k, v in self.tuples.tx.items()},
            "rx": {key(k): list(v) for k, v in self.tuples.rx.items()},
            "route": {key(k): list(v) for k, v in self.tuples.route.items()},
        }
        doc["timing"] = {
            "wcrt": {
                t: {
                    "wcet": self.task_parts[t][0],
                    "mem_service": self.task_parts[t][1],
                    "i_bus": self.task_parts[t][2],
                    "i_core": self.task_parts[t][3],
                    "total": v,
                }
                for t, v in self.task_wcrt.items()
            },
            "wctt": {
                key(k): {
                    "d_tx": self.transfer_parts[k][0],
                    "d_noc": self.transfer_parts[k][1],
                    "d_rx": self.transfer_parts[k][2],
                    "total": v,
                }
                for k, v in self.transfer_wctt.items()
            },
            "makespan": self.makespan,
            "throughput": self.throughput,
        }
        doc["objectives"] = {
            "latency": self.objectives[0],
            "resource": self.objectives[1],
            "energy": self.objectives[2],
        }
        return doc

    def _hosting_tiles(self) -> set[str]:
        return {c.rsplit(".", 1)[0] for c in self.schemes}


def effective_mem_demand(app, bindings: TMapping[str, str], tile_of) -> dict[str, int]:
    """Task memory demand plus the local-message reads and writes.

    A message whose consumer sits on the producer's tile is exchanged
    through the tile memory: the consumer re-reads it, and the producer
    writes it once if at least one consumer is local.
    """
    eff = {t.id: t.mem_demand for t in app.tasks}
    for m in app.messages:
        src_tile = tile_of(bindings[m.src])
        local = False
        for consumer in m.consumers:
            if tile_of(bindings[consumer]) == src_tile:
                local = True
                eff[consumer] += m.mem_demand
        if local:
            eff[m.src] += m.mem_demand
    return eff


def route_instances(
    spec: ProblemSpec, bindings: TMapping[str, str]
) -> tuple[RoutedInstance, ...]:
    """One routed instance per message and remote consumer, XY-routed."""
    arch = spec.architecture
    out: list[RoutedInstance] = []
    for m in spec.application.messages:
        src_tile = arch.tile_of_core(bindings[m.src])
        for consumer in m.consumers:
            dst_tile = arch.tile_of_core(bindings[consumer])
            if dst_tile.id == src_tile.id:
                continue
            links = xy_route(src_tile.pos, dst_tile.pos)
            out.append(
                RoutedInstance(
                    message=m,
                    consumer=consumer,
                    src_tile=src_tile.id,
                    dst_tile=dst_tile.id,
                    links=links,
                    hops=len(links) + arch.noc.route_hop_offset,
                )
            )
    return tuple(out)


def resource_usage(
    spec: ProblemSpec,
    bindings: TMapping[str, str],
    reserved_tiles: frozenset[str],
    reserved_cores: frozenset[str],
    task_weights: TMapping[str, int],
) -> float:
    """Allocated compute, in cores: a reserved tile claims all its cores, a
    reserved core claims one, a shared core its weight fraction."""
    arch = spec.architecture
    tasks_on_core: dict[str, list[str]] = {}
    for task_id, core_id in bindings.items():
        tasks_on_core.setdefault(core_id, []).append(task_id)
    usage = 0.0
    for tile in arch.tiles:
        hosting = [c for c in tile.cores if c.id in tasks_on_core]
        if not hosting:
            continue
        if tile.id in reserved_tiles:
            usage += len(tile.cores)
            continue
        for core in hosting:
            if core.id in reserved_cores:
                usage += 1.0
            else:
                total_w = sum(task_weights[t] for t in tasks_on_core[core.id])
                usage += total_w / core.policy.capacity
    return usage


def _coeff(cfg: TMapping, name: str):
    if name not in cfg:
        raise MissingCoefficient(name)
    return cfg[name]


def energy(
    spec: ProblemSpec,
    bindings: TMapping[str, str],
    instances: Sequence[RoutedInstance],
    usage: float,
) -> float:
    """Affine energy surrogate per iteration of each element."""
    arch = spec.architecture
    cfg = arch.energy
    dyn_map = _coeff(cfg, "dynamic_per_core_type")
    total = _coeff(cfg, "static_per_core") * usage
    for t in spec.application.tasks:
        core = arch.core(bindings[t.id])
        if core.core_type not in dyn_map:
            raise MissingCoefficient(f"dynamic_per_core_type[{core.core_type}]")
        total += dyn_map[core.core_type] * (t.wcet[core.core_type] / 1000.0)
    if instances:
        per_hop = _coeff(cfg, "e_link") + _coeff(cfg, "e_router")
        per_word = _coeff(cfg, "e_bus_src") + _coeff(cfg, "e_bus_dst")
        for inst in instances:
            flits = arch.noc.flits_for(inst.message.payload_bytes)
            total += flits * inst.hops * per_hop
            total += inst.message.mem_demand * per_word
    return total


def _build(
    spec: ProblemSpec,
    bindings: dict[str, str],
    flagged_cores: set[str],
    flagged_tiles: set[str],
    mode: ExplorationMode,
    genotype: Genotype | None,
) -> MappingResult:
    arch = spec.architecture
    app = spec.application

    hosting_cores = set(bindings.values())
    hosting_tiles = {arch.tile_of_core(c).id for c in hosting_cores}
    reserved_tiles = frozenset(flagged_tiles & hosting_tiles)
    reserved_cores = frozenset(
        c for c in flagged_cores & hosting_cores
        if arch.tile_of_core(c).id not in reserved_tiles
    )

    schemes: dict[str, IsolationScheme] = {}
    for core_id in sorted(hosting_cores):
        if arch.tile_of_core(core_id).id in reserved_tiles:
            schemes[core_id] = IsolationScheme.TILE_RESERVATION
        elif core_id in reserved_cores:
            schemes[core_id] = IsolationScheme.CORE_RESERVATION
        else:
            schemes[core_id] = IsolationScheme.CORE_SHARING

    instances = route_instances(spec, bindings)
    result = MappingResult(
        mode=mode,
        bindings=bindings,
        reserved_cores=reserved_cores,
        reserved_tiles=reserved_tiles,
        schemes=schemes,
        instances=instances,
        feasible=True,
        genotype=genotype,
    )

    eff_md = effective_mem_demand(app, bindings, lambda c: arch.tile_of_core(c).id)
    task_weights: dict[str, int] = {}
    message_weights: dict[InstanceKey, int] = {}
    try:
        for t in app.tasks:
            core = arch.core(bindings[t.id])
            tile = arch.tile(core.tile_id)
            task_weights[t.id] = scheduling.min_task_weight(
                t.period, t.wcet[core.core_type], eff_md[t.id], tile
            )
        for inst in instances:
            m = inst.message
            message_weights[inst.key] = scheduling.min_message_weight(
                m.period,
                m.mem_demand,
                arch.noc.flits_for(m.payload_bytes),
                inst.hops,
                arch.tile(inst.src_tile),
                arch.tile(inst.dst_tile),
                arch.noc,
            )
    except Infeasible as exc:
        result.feasible = False
        result.reason = str(exc)
        return result

    budget = scheduling.check_feasibility(
        spec, bindings, instances, task_weights, message_weights
    )
    result.budget = budget
    if not budget.feasible:
        result.feasible = False
        result.reason = budget.reason
        return result

    exclusive = {
        c for c, s in schemes.items() if s is not IsolationScheme.CORE_SHARING
    }
    tuples = scheduling.refine_tuples(
        spec, bindings, instances, task_weights, message_weights,
        reserved_tiles, exclusive,
    )
    result.tuples = tuples

    for t in app.tasks:
        core = arch.core(bindings[t.id])
        tile = arch.tile(core.tile_id)
        inputs = timing.TaskTimingInputs(
            wcet=t.wcet[core.core_type],
            core_tuple=tuples.core[t.id],
            accesses=(
                timing.BusAccess(
                    eff_md[t.id], tile.memory.service_time, tuples.core_bus[core.id]
                ),
            ),
        )
        result.task_wcrt[t.id] = timing.wcrt(inputs)
        result.task_parts[t.id] = (
            inputs.wcet,
            eff_md[t.id] * tile.memory.service_time,
            timing.bus_interference(inputs),
            timing.core_preemption(inputs),
        )

    for inst in instances:
        m = inst.message
        src_tile = arch.tile(inst.src_tile)
        dst_tile = arch.tile(inst.dst_tile)
        inputs = timing.MessageTimingInputs(
            mem_demand=m.mem_demand,
            flits=arch.noc.flits_for(m.payload_bytes),
            hops=inst.hops,
            router_delay=arch.noc.router_delay,
            tau=arch.noc.tau,
            src_service_time=src_tile.memory.service_time,
            src_bus_tuple=tuples.tx_bus[inst.src_tile],
            tx_tuple=tuples.tx[inst.key],
            route_tuple=tuples.route[inst.key],
            dst_service_time=dst_tile.memory.service_time,
            dst_bus_tuple=tuples.rx_bus[inst.dst_tile],
            rx_tuple=tuples.rx[inst.key],
        )
        parts = (
            timing.tx_latency(inputs),
            timing.noc_latency(inputs),
            timing.rx_latency(inputs),
        )
        result.transfer_parts[inst.key] = parts
        result.transfer_wctt[inst.key] = sum(parts)

    result.makespan = timing.makespan(spec.paths, result.task_wcrt, result.transfer_wctt)
    result.throughput = timing.throughput(result.task_wcrt, result.transfer_wctt)

    usage = resource_usage(spec, bindings, reserved_tiles, reserved_cores, task_weights)
    result.objectives = (
        result.makespan,
        usage,
        energy(spec, bindings, instances, usage),
    )
    return result


def decode(
    spec: ProblemSpec,
    genotype: Genotype,
    mode: ExplorationMode = ExplorationMode.ISOLATION_AWARE,
) -> MappingResult:
    """Decode a genotype under a mode; fixed modes override every flag.

    Out-of-range binding genes are repaired by wrapping onto the task's
    edge list, so any integer genotype decodes deterministically.
    """
    tasks = spec.application.tasks
    bindings = {
        t.id: spec.edges_of[t.id][genotype.bindings[i] % len(spec.edges_of[t.id])]
        for i, t in enumerate(tasks)
    }
    if mode is ExplorationMode.FIXED_CS:
        cores, tiles = set(), set()
    elif mode is ExplorationMode.FIXED_CR:
        cores, tiles = {c.id for c in spec.architecture.cores}, set()
    elif mode is ExplorationMode.FIXED_TR:
        cores, tiles = set(), {t.id for t in spec.architecture.tiles}
    else:
        cores = {
            c.id
            for c, bit in zip(spec.architecture.cores, genotype.core_flags)
            if bit
        }
        tiles = {
            t.id
            for t, bit in zip(spec.architecture.tiles, genotype.tile_flags)
            if bit
        }
    return _build(spec, bindings, cores, tiles, mode, genotype)


def from_bindings(
    spec: ProblemSpec,
    bindings: TMapping[str, str],
    reserved_cores: set[str] | frozenset[str] = frozenset(),
    reserved_tiles: set[str] | frozenset[str] = frozenset(),
    mode: ExplorationMode = ExplorationMode.ISOLATION_AWARE,
) -> MappingResult:
    """Analyze an explicit binding (a mapping file) through the same pipeline."""
    arch = spec.architecture
    for t in spec.application.tasks:
        if t.id not in bindings:
            raise ValidationError(f"mapping: task {t.id} has no binding")
        core = bindings[t.id]
        if core not in spec.edges_of[t.id]:
            raise ValidationError(
                f"mapping: {t.id} -> {core} is not among its mapping edges"
            )
    for name in bindings:
        if name not in spec.application._tasks_by_id:
            raise ValidationError(f"mapping: unknown task {name!r}")
    for c in reserved_cores:
        if c not in {x.id for x in arch.cores}:
            raise ValidationError(f"mapping: unknown core {c!r} in core_flags")
    for t in reserved_tiles:
        if t not in {x.id for x in arch.tiles}:
            raise ValidationError(f"mapping: unknown tile {t!r} in tile_flags")
    return _build(spec, dict(bindings), set(reserved_cores), set(reserved_tiles), mode, None)


def load_mapping_doc(spec: ProblemSpec, doc: dict) -> MappingResult:
    """Build from a mapping document: bindings plus optional flag maps."""
    if not isinstance(doc, dict) or "bindings" not in doc:
        raise ValidationError("mapping document needs a 'bindings' object")
    flags = doc.get("core_flags", {})
    cores = {c for c, v in flags.items() if v == "reserved"}
    tiles = {t for t, v in doc.get("tile_flags", {}).items() if v == "reserved"}
    return from_bindings(spec, doc["bindings"], cores, tiles)
