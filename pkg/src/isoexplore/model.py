"""Problem model: application graph, platform graph, mapping options.

A problem document is one JSON object with three sections:

  application    periodic tasks and the messages between them (a DAG)
  architecture   mesh of tiles; each tile has cores, a memory with its bus,
                 and a network adapter (TX/RX) onto the routed mesh
  mapping_edges  which task may run on which core

Times in the document carry unit suffixes (_us, _ns); in memory everything
is integer nanoseconds so ceiling arithmetic is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping

from .arbitration import ArbitrationPolicy
from .errors import (
    CycleError,
    EmptyGraph,
    SpecSyntaxError,
    ValidationError,
)

NS_PER_US = 1000


# ---------------------------------------------------------------- application


@dataclass(frozen=True)
class Task:
    id: str
    period: int                      # release period = implicit deadline, ns
    wcet: Mapping[str, int]          # worst-case execution time per core type, ns
    mem_demand: int                  # single-word memory accesses per iteration

    def __post_init__(self):
        if self.period <= 0:
            raise ValidationError(f"task {self.id}: period must be positive")
        if not self.wcet:
            raise ValidationError(f"task {self.id}: wcet map is empty")
        for ctype, val in self.wcet.items():
            if val <= 0:
                raise ValidationError(
                    f"task {self.id}: wcet for core type {ctype!r} must be positive"
                )
        if self.mem_demand < 0:
            raise ValidationError(f"task {self.id}: mem_demand must be >= 0")


@dataclass(frozen=True)
class Message:
    id: str
    src: str
    dst: str                         # primary consumer; extras via consumers
    period: int                      # ns
    payload_bytes: int
    mem_demand: int                  # words read by TX / written by RX
    extra_consumers: tuple[str, ...] = ()

    def __post_init__(self):
        if self.period <= 0:
            raise ValidationError(f"message {self.id}: period must be positive")
        if self.payload_bytes <= 0:
            raise ValidationError(f"message {self.id}: payload_bytes must be positive")
        if self.mem_demand <= 0:
            raise ValidationError(f"message {self.id}: mem_demand must be positive")
        if self.src == self.dst or self.src in self.extra_consumers:
            raise ValidationError(f"message {self.id}: src equals a consumer")

    @property
    def consumers(self) -> tuple[str, ...]:
        return (self.dst, *self.extra_consumers)


@dataclass(frozen=True)
class ApplicationGraph:
    tasks: tuple[Task, ...]
    messages: tuple[Message, ...]

    def __post_init__(self):
        if not self.tasks:
            raise EmptyGraph("application declares no tasks")
        ids: set[str] = set()
        for node in (*self.tasks, *self.messages):
            if node.id in ids:
                raise ValidationError(f"duplicate node id {node.id!r}")
            ids.add(node.id)
        task_ids = {t.id for t in self.tasks}
        for m in self.messages:
            if m.src not in task_ids:
                raise ValidationError(f"message {m.id}: src {m.src!r} is not a task")
            for c in m.consumers:
                if c not in task_ids:
                    raise ValidationError(
                        f"message {m.id}: consumer {c!r} is not a task"
                    )
            if len(set(m.consumers)) != len(m.consumers):
                raise ValidationError(f"message {m.id}: duplicate consumer")
        end_to_end_paths(self)  # raises CycleError on cycles

    def task(self, task_id: str) -> Task:
        return self._tasks_by_id[task_id]

    def message(self, msg_id: str) -> Message:
        return self._messages_by_id[msg_id]

    @cached_property
    def _tasks_by_id(self) -> dict[str, Task]:
        return {t.id: t for t in self.tasks}

    @cached_property
    def _messages_by_id(self) -> dict[str, Message]:
        return {m.id: m for m in self.messages}

    @cached_property
    def outputs_of(self) -> dict[str, tuple[Message, ...]]:
        """Messages produced by each task, in declaration order."""
        out: dict[str, list[Message]] = {t.id: [] for t in self.tasks}
        for m in self.messages:
            out[m.src].append(m)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def inputs_of(self) -> dict[str, tuple[Message, ...]]:
        """Messages consumed by each task, in declaration order."""
        inc: dict[str, list[Message]] = {t.id: [] for t in self.tasks}
        for m in self.messages:
            for c in m.consumers:
                inc[c].append(m)
        return {k: tuple(v) for k, v in inc.items()}


def end_to_end_paths(app: ApplicationGraph) -> tuple[tuple[str, ...], ...]:
    """All maximal source-to-sink chains, alternating task and message ids.

    Deterministic: depth-first in declaration order. A task without any
    messages forms a path of length one.
    """
    produced: dict[str, list[str]] = {t.id: [] for t in app.tasks}
    consumed_by: dict[str, tuple[str, ...]] = {}
    has_input: set[str] = set()
    for m in app.messages:
        produced[m.src].append(m.id)
        consumed_by[m.id] = m.consumers
        has_input.update(m.consumers)

    paths: list[tuple[str, ...]] = []
    chain: list[str] = []
    on_chain: set[str] = set()

    def walk(node: str, successors: Iterable[str], is_task: bool):
        if node in on_chain:
            raise CycleError(f"application graph has a cycle through {node!r}")
        chain.append(node)
        on_chain.add(node)
        succ = list(successors)
        if not succ:
            paths.append(tuple(chain))
        for nxt in succ:
            if is_task:
                walk(nxt, consumed_by[nxt], is_task=False)
            else:
                walk(nxt, produced[nxt], is_task=True)
        chain.pop()
        on_chain.discard(node)

    sources = [t.id for t in app.tasks if t.id not in has_input]
    if not sources and app.tasks:
        raise CycleError("application graph has no source task (cycle)")
    for s in sources:
        walk(s, produced[s], is_task=True)
    return tuple(paths)


# --------------------------------------------------------------- architecture


@dataclass(frozen=True)
class Core:
    id: str
    tile_id: str
    core_type: str
    policy: ArbitrationPolicy


@dataclass(frozen=True)
class Memory:
    id: str
    service_time: int                # per single-word access, ns

    def __post_init__(self):
        if self.service_time <= 0:
            raise ValidationError(f"memory {self.id}: service time must be positive")


@dataclass(frozen=True)
class Tile:
    id: str
    type_name: str
    pos: tuple[int, int]
    cores: tuple[Core, ...]
    memories: tuple[Memory, ...]     # primary memory first; one bus serves it
    bus_policy: ArbitrationPolicy
    bus_master_weight: int           # per-master slots within the bus cycle
    tx_policy: ArbitrationPolicy
    rx_policy: ArbitrationPolicy

    def __post_init__(self):
        if not self.cores:
            raise ValidationError(f"tile {self.id}: needs at least one core")
        if not self.memories:
            raise ValidationError(f"tile {self.id}: needs at least one memory")
        if self.bus_master_weight < 1:
            raise ValidationError(f"tile {self.id}: bus_master_weight must be >= 1")
        expected = (len(self.cores) + 2) * self.bus_master_weight
        if self.bus_policy.capacity != expected:
            raise ValidationError(
                f"tile {self.id}: bus capacity {self.bus_policy.capacity} does not "
                f"cover its masters (cores + TX + RX = {expected} slots)"
            )

    @property
    def memory(self) -> Memory:
        return self.memories[0]

    @property
    def max_service_time(self) -> int:
        return max(m.service_time for m in self.memories)


@dataclass(frozen=True)
class NocConfig:
    tau: int                         # link cycle = link slot length, ns
    router_delay: int                # per-router pipeline, cycles
    link_policy: ArbitrationPolicy
    flit_payload_bytes: int
    header_flits: int
    route_hop_offset: int            # hops = links on route + offset

    def __post_init__(self):
        if self.tau <= 0:
            raise ValidationError("noc: tau_ns must be positive")
        if self.router_delay < 0:
            raise ValidationError("noc: router_delay_cycles must be >= 0")
        if self.link_policy.slot_len != self.tau:
            raise ValidationError(
                f"noc: link slot_len {self.link_policy.slot_len} must equal tau {self.tau}"
            )
        if self.flit_payload_bytes <= 0:
            raise ValidationError("noc: flit_payload_bytes must be positive")
        if self.header_flits < 0:
            raise ValidationError("noc: header_flits must be >= 0")
        if self.route_hop_offset < 0:
            raise ValidationError("noc: route_hop_offset must be >= 0")

    def flits_for(self, payload_bytes: int) -> int:
        return -(-payload_bytes // self.flit_payload_bytes) + self.header_flits


@dataclass(frozen=True)
class ArchitectureGraph:
    mesh: tuple[int, int]
    tiles: tuple[Tile, ...]
    noc: NocConfig
    energy: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        w, h = self.mesh
        if w < 1 or h < 1:
            raise ValidationError(f"mesh {self.mesh} must be at least 1x1")
        seen_pos: dict[tuple[int, int], str] = {}
        seen_ids: set[str] = set()
        for tile in self.tiles:
            if tile.id in seen_ids:
                raise ValidationError(f"duplicate tile id {tile.id!r}")
            seen_ids.add(tile.id)
            x, y = tile.pos
            if not (0 <= x < w and 0 <= y < h):
                raise ValidationError(
                    f"tile {tile.id}: pos {tile.pos} outside mesh {self.mesh}"
                )
            if tile.pos in seen_pos:
                raise ValidationError(
                    f"tile {tile.id}: pos {tile.pos} already taken by {seen_pos[tile.pos]}"
                )
            seen_pos[tile.pos] = tile.id
        if not self.tiles:
            raise ValidationError("architecture declares no tiles")

    def tile(self, tile_id: str) -> Tile:
        return self._tiles_by_id[tile_id]

    def core(self, core_id: str) -> Core:
        return self._cores_by_id[core_id]

    def tile_of_core(self, core_id: str) -> Tile:
        return self._tiles_by_id[self._cores_by_id[core_id].tile_id]

    def tile_at(self, pos: tuple[int, int]) -> Tile:
        return self._tiles_by_pos[pos]

    @cached_property
    def cores(self) -> tuple[Core, ...]:
        return tuple(c for t in self.tiles for c in t.cores)

    @cached_property
    def _tiles_by_id(self) -> dict[str, Tile]:
        return {t.id: t for t in self.tiles}

    @cached_property
    def _cores_by_id(self) -> dict[str, Core]:
        return {c.id: c for t in self.tiles for c in t.cores}

    @cached_property
    def _tiles_by_pos(self) -> dict[tuple[int, int], Tile]:
        return {t.pos: t for t in self.tiles}


# ------------------------------------------------------------------- problem


@dataclass(frozen=True)
class MappingEdge:
    task: str
    core: str


@dataclass
class ProblemSpec:
    application: ApplicationGraph
    architecture: ArchitectureGraph
    mapping_edges: tuple[MappingEdge, ...]

    def __post_init__(self):
        arch = self.architecture
        app = self.application
        seen: set[tuple[str, str]] = set()
        for edge in self.mapping_edges:
            if edge.task not in app._tasks_by_id:
                raise ValidationError(f"mapping edge: unknown task {edge.task!r}")
            if edge.core not in arch._cores_by_id:
                raise ValidationError(f"mapping edge: unknown core {edge.core!r}")
            if (edge.task, edge.core) in seen:
                raise ValidationError(
                    f"duplicate mapping edge {edge.task!r} -> {edge.core!r}"
                )
            seen.add((edge.task, edge.core))
            ctype = arch.core(edge.core).core_type
            if ctype not in app.task(edge.task).wcet:
                raise ValidationError(
                    f"task {edge.task}: no wcet for core type {ctype!r} "
                    f"(mapping edge to {edge.core})"
                )
        for t in app.tasks:
            if not any(e.task == t.id for e in self.mapping_edges):
                raise ValidationError(f"task {t.id}: has no mapping edges")

    @cached_property
    def edges_of(self) -> dict[str, tuple[str, ...]]:
        """Allowed target cores per task, in declaration order."""
        out: dict[str, list[str]] = {t.id: [] for t in self.application.tasks}
        for e in self.mapping_edges:
            out[e.task].append(e.core)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def paths(self) -> tuple[tuple[str, ...], ...]:
        return end_to_end_paths(self.application)


# ------------------------------------------------------------ parse and emit


def _ctx(path: str) -> str:
    return f" at {path}" if path else ""


def _req(obj: Any, key: str, path: str) -> Any:
    if not isinstance(obj, dict):
        raise SpecSyntaxError(f"expected an object{_ctx(path)}")
    if key not in obj:
        raise SpecSyntaxError(f"missing field {key!r}{_ctx(path)}")
    return obj[key]


def _req_list(obj: Any, key: str, path: str) -> list:
    val = _req(obj, key, path)
    if not isinstance(val, list):
        raise SpecSyntaxError(f"field {key!r} must be an array{_ctx(path)}")
    return val


def _int(val: Any, what: str) -> int:
    if isinstance(val, bool) or not isinstance(val, int):
        raise SpecSyntaxError(f"{what} must be an integer, got {val!r}")
    return val


def _ns_from_us(val: Any, what: str) -> int:
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise SpecSyntaxError(f"{what} must be a number, got {val!r}")
    return round(val * NS_PER_US)


def _policy(obj: Any, path: str, *, unit: str, slot_required: bool = True) -> ArbitrationPolicy:
    if not isinstance(obj, dict):
        raise SpecSyntaxError(f"expected a policy object{_ctx(path)}")
    conv = _ns_from_us if unit == "us" else lambda v, w: _int(v, w)
    slot = None
    if slot_required:
        slot = conv(_req(obj, f"slot_len_{unit}", path), f"{path}.slot_len_{unit}")
    delay = conv(_req(obj, f"arb_delay_{unit}", path), f"{path}.arb_delay_{unit}")
    cap = _int(_req(obj, "capacity", path), f"{path}.capacity")
    wc = _req(obj, "work_conserving", path)
    if not isinstance(wc, bool):
        raise SpecSyntaxError(f"{path}.work_conserving must be a boolean")
    try:
        return ArbitrationPolicy(slot, delay, cap, wc)
    except ValueError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def _bare_policy(obj: Any, path: str) -> ArbitrationPolicy:
    """Policy with unsuffixed fields (nanoseconds implied): the NoC link."""
    if not isinstance(obj, dict):
        raise SpecSyntaxError(f"expected a policy object{_ctx(path)}")
    slot = _int(_req(obj, "slot_len", path), f"{path}.slot_len")
    delay = _int(_req(obj, "arb_delay", path), f"{path}.arb_delay")
    cap = _int(_req(obj, "capacity", path), f"{path}.capacity")
    wc = _req(obj, "work_conserving", path)
    if not isinstance(wc, bool):
        raise SpecSyntaxError(f"{path}.work_conserving must be a boolean")
    try:
        return ArbitrationPolicy(slot, delay, cap, wc)
    except ValueError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def _parse_application(obj: Any) -> ApplicationGraph:
    tasks = []
    for i, raw in enumerate(_req_list(obj, "tasks", "application")):
        path = f"application.tasks[{i}]"
        wcet_raw = _req(raw, "wcet_us", path)
        if not isinstance(wcet_raw, dict):
            raise SpecSyntaxError(f"{path}.wcet_us must be a map of core type to time")
        tasks.append(
            Task(
                id=str(_req(raw, "id", path)),
                period=_ns_from_us(_req(raw, "period_us", path), f"{path}.period_us"),
                wcet={
                    str(k): _ns_from_us(v, f"{path}.wcet_us[{k}]")
                    for k, v in wcet_raw.items()
                },
                mem_demand=_int(_req(raw, "mem_demand", path), f"{path}.mem_demand"),
            )
        )

    messages = []
    for i, raw in enumerate(_req_list(obj, "messages", "application") if "messages" in obj else []):
        path = f"application.messages[{i}]"
        messages.append(
            Message(
                id=str(_req(raw, "id", path)),
                src=str(_req(raw, "src", path)),
                dst=str(_req(raw, "dst", path)),
                period=_ns_from_us(_req(raw, "period_us", path), f"{path}.period_us"),
                payload_bytes=_int(_req(raw, "payload_bytes", path), f"{path}.payload_bytes"),
                mem_demand=_int(_req(raw, "mem_demand", path), f"{path}.mem_demand"),
            )
        )

    # Optional explicit edge list: must agree with src/dst; message->task
    # edges beyond dst add consumers.
    if isinstance(obj, dict) and "edges" in obj:
        by_id = {m.id: m for m in messages}
        task_ids = {t.id for t in tasks}
        extras: dict[str, list[str]] = {m.id: [] for m in messages}
        for i, raw in enumerate(_req_list(obj, "edges", "application")):
            path = f"application.edges[{i}]"
            src = str(_req(raw, "src", path))
            dst = str(_req(raw, "dst", path))
            if src in task_ids and dst in by_id:
                if by_id[dst].src != src:
                    raise ValidationError(
                        f"{path}: producer edge {src}->{dst} contradicts "
                        f"message src {by_id[dst].src!r}"
                    )
            elif src in by_id and dst in task_ids:
                m = by_id[src]
                if dst != m.dst and dst not in extras[src]:
                    extras[src].append(dst)
            else:
                raise ValidationError(
                    f"{path}: edge {src!r}->{dst!r} must link a task and a message"
                )
        messages = [
            Message(
                id=m.id, src=m.src, dst=m.dst, period=m.period,
                payload_bytes=m.payload_bytes, mem_demand=m.mem_demand,
                extra_consumers=tuple(extras[m.id]),
            )
            for m in messages
        ]

    return ApplicationGraph(tasks=tuple(tasks), messages=tuple(messages))


def _parse_architecture(obj: Any) -> ArchitectureGraph:
    mesh_raw = _req_list(obj, "mesh", "architecture")
    if len(mesh_raw) != 2:
        raise SpecSyntaxError("architecture.mesh must be [width, height]")
    mesh = (_int(mesh_raw[0], "mesh width"), _int(mesh_raw[1], "mesh height"))

    types: dict[str, dict] = {}
    for i, raw in enumerate(_req_list(obj, "tile_types", "architecture")):
        path = f"architecture.tile_types[{i}]"
        name = str(_req(raw, "name", path))
        if name in types:
            raise ValidationError(f"{path}: duplicate tile type {name!r}")
        types[name] = raw

    noc_raw = _req(obj, "noc", "architecture")
    noc = NocConfig(
        tau=_int(_req(noc_raw, "tau_ns", "architecture.noc"), "noc.tau_ns"),
        router_delay=_int(
            _req(noc_raw, "router_delay_cycles", "architecture.noc"),
            "noc.router_delay_cycles",
        ),
        link_policy=_bare_policy(
            _req(noc_raw, "link_policy", "architecture.noc"), "architecture.noc.link_policy"
        ),
        flit_payload_bytes=_int(
            _req(noc_raw, "flit_payload_bytes", "architecture.noc"), "noc.flit_payload_bytes"
        ),
        header_flits=_int(
            _req(noc_raw, "header_flits", "architecture.noc"), "noc.header_flits"
        ),
        route_hop_offset=_int(
            noc_raw.get("route_hop_offset", 1), "noc.route_hop_offset"
        ),
    )

    tiles = []
    for i, raw in enumerate(_req_list(obj, "tiles", "architecture")):
        path = f"architecture.tiles[{i}]"
        tid = str(_req(raw, "id", path))
        type_name = str(_req(raw, "type", path))
        if type_name not in types:
            raise ValidationError(f"{path}: unknown tile type {type_name!r}")
        pos_raw = _req_list(raw, "pos", path)
        if len(pos_raw) != 2:
            raise SpecSyntaxError(f"{path}.pos must be [x, y]")
        traw = types[type_name]
        tpath = f"architecture.tile_types[{type_name}]"
        core_policy = _policy(_req(traw, "core_policy", tpath), f"{tpath}.core_policy", unit="us")
        n_cores = _int(_req(traw, "cores", tpath), f"{tpath}.cores")
        if n_cores < 1:
            raise ValidationError(f"{tpath}: cores must be >= 1")
        core_type = str(_req(traw, "core_type", tpath))
        memories = []
        for j, mraw in enumerate(_req_list(traw, "memories", tpath)):
            memories.append(
                Memory(
                    id=f"{tid}.mem{j}",
                    service_time=_int(
                        _req(mraw, "service_time_ns", f"{tpath}.memories[{j}]"),
                        f"{tpath}.memories[{j}].service_time_ns",
                    ),
                )
            )
        na_raw = _req(traw, "na", tpath)
        tiles.append(
            Tile(
                id=tid,
                type_name=type_name,
                pos=(_int(pos_raw[0], f"{path}.pos x"), _int(pos_raw[1], f"{path}.pos y")),
                cores=tuple(
                    Core(id=f"{tid}.c{j}", tile_id=tid, core_type=core_type, policy=core_policy)
                    for j in range(n_cores)
                ),
                memories=tuple(memories),
                bus_policy=_policy(
                    _req(traw, "bus_policy", tpath), f"{tpath}.bus_policy", unit="ns"
                ),
                bus_master_weight=_int(
                    traw.get("bus_master_weight", 1), f"{tpath}.bus_master_weight"
                ),
                tx_policy=_policy(
                    _req(na_raw, "tx", f"{tpath}.na"), f"{tpath}.na.tx",
                    unit="ns", slot_required=False,
                ),
                rx_policy=_policy(
                    _req(na_raw, "rx", f"{tpath}.na"), f"{tpath}.na.rx",
                    unit="ns", slot_required=False,
                ),
            )
        )

    energy = obj.get("energy", {})
    if not isinstance(energy, dict):
        raise SpecSyntaxError("architecture.energy must be an object")
    return ArchitectureGraph(mesh=mesh, tiles=tuple(tiles), noc=noc, energy=energy)


def parse_spec(text: str) -> ProblemSpec:
    """Parse and validate a problem document from JSON text."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecSyntaxError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SpecSyntaxError("document root must be an object")
    app = _parse_application(_req(doc, "application", ""))
    arch = _parse_architecture(_req(doc, "architecture", ""))
    edges = tuple(
        MappingEdge(
            task=str(_req(raw, "task", f"mapping_edges[{i}]")),
            core=str(_req(raw, "core", f"mapping_edges[{i}]")),
        )
        for i, raw in enumerate(_req_list(doc, "mapping_edges", ""))
    )
    return ProblemSpec(application=app, architecture=arch, mapping_edges=edges)


def load_spec(path: str) -> ProblemSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_spec(fh.read())


def _us(ns: int) -> float | int:
    val = ns / NS_PER_US
    return int(val) if val == int(val) else val


def emit_spec(spec: ProblemSpec) -> str:
    """Serialize back to document JSON; parse(emit(s)) is structurally equal."""
    app = spec.application
    arch = spec.architecture

    tile_types: dict[str, dict] = {}
    tiles_doc = []
    for tile in arch.tiles:
        if tile.type_name not in tile_types:
            cp = tile.cores[0].policy
            bp = tile.bus_policy
            tile_types[tile.type_name] = {
                "name": tile.type_name,
                "cores": len(tile.cores),
                "core_type": tile.cores[0].core_type,
                "core_policy": {
                    "slot_len_us": _us(cp.slot_len),
                    "arb_delay_us": _us(cp.arb_delay),
                    "capacity": cp.capacity,
                    "work_conserving": cp.work_conserving,
                },
                "memories": [
                    {"service_time_ns": m.service_time} for m in tile.memories
                ],
                "bus_policy": {
                    "slot_len_ns": bp.slot_len,
                    "arb_delay_ns": bp.arb_delay,
                    "capacity": bp.capacity,
                    "work_conserving": bp.work_conserving,
                },
                "bus_master_weight": tile.bus_master_weight,
                "na": {
                    "tx": {
                        "arb_delay_ns": tile.tx_policy.arb_delay,
                        "capacity": tile.tx_policy.capacity,
                        "work_conserving": tile.tx_policy.work_conserving,
                    },
                    "rx": {
                        "arb_delay_ns": tile.rx_policy.arb_delay,
                        "capacity": tile.rx_policy.capacity,
                        "work_conserving": tile.rx_policy.work_conserving,
                    },
                },
            }
        tiles_doc.append({"id": tile.id, "type": tile.type_name, "pos": list(tile.pos)})

    edges_doc = []
    for m in app.messages:
        edges_doc.append({"src": m.src, "dst": m.id})
        for c in m.consumers:
            edges_doc.append({"src": m.id, "dst": c})

    doc = {
        "application": {
            "tasks": [
                {
                    "id": t.id,
                    "period_us": _us(t.period),
                    "wcet_us": {k: _us(v) for k, v in t.wcet.items()},
                    "mem_demand": t.mem_demand,
                }
                for t in app.tasks
            ],
            "messages": [
                {
                    "id": m.id,
                    "src": m.src,
                    "dst": m.dst,
                    "period_us": _us(m.period),
                    "payload_bytes": m.payload_bytes,
                    "mem_demand": m.mem_demand,
                }
                for m in app.messages
            ],
            "edges": edges_doc,
        },
        "architecture": {
            "mesh": list(arch.mesh),
            "tile_types": list(tile_types.values()),
            "tiles": tiles_doc,
            "noc": {
                "tau_ns": arch.noc.tau,
                "router_delay_cycles": arch.noc.router_delay,
                "link_policy": {
                    "slot_len": arch.noc.link_policy.slot_len,
                    "arb_delay": arch.noc.link_policy.arb_delay,
                    "capacity": arch.noc.link_policy.capacity,
                    "work_conserving": arch.noc.link_policy.work_conserving,
                },
                "flit_payload_bytes": arch.noc.flit_payload_bytes,
                "header_flits": arch.noc.header_flits,
                "route_hop_offset": arch.noc.route_hop_offset,
            },
            "energy": dict(arch.energy),
        },
        "mapping_edges": [
            {"task": e.task, "core": e.core} for e in spec.mapping_edges
        ],
    }
    return json.dumps(doc, indent=2) + "\n"
