"""Adversarial discrete-event execution of a mapped workload.

Independent check of the analytical bounds: the mapped tasks and transfers
run on a simulated platform (slotted cores and buses, adapter units, a
synchronous mesh) under adversary-controlled background load, release
jitter and access patterns. Observed response and traversal times must
never exceed the bounds computed for the same mapping.

Supported platform family, validated up front:
  - every bus slot equals its memory's single-word service time,
  - every duration is a multiple of the link cycle, link arbitration
    carries no switch delay, so all events stay on the cycle grid,
  - message periods are multiples of their producer's period.

Adversaries ("phantoms") own exactly the slots the mapping left free;
reserved tiles and exclusively allocated cores have none. While a shared
arbiter has no real work pending, its rotation is not simulated; on wake
the pointer position is adversary-chosen. Both are behaviours a real
background owner could produce, so observed times stay genuine.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from random import Random
from typing import Callable

from .errors import BoundViolation, DomainError, SimHorizonExceeded
from .mapping import MappingResult, effective_mem_demand
from .model import ProblemSpec
from .scheduling import InstanceKey

PHANTOM = "~adv"

PATTERNS = ("front", "spread", "back", "random")
PHANTOM_LOADS = ("max", "random", "none")


def _is_phantom(owner) -> bool:
    """Slot owners are strings or transfer keys; phantoms are strings."""
    return isinstance(owner, str) and owner.startswith(PHANTOM)


@dataclass(frozen=True)
class TrialConfig:
    """One adversarial scenario: everything the adversary may choose."""

    seed: int
    phantom_load: str = "max"        # background owners: always busy / coin / idle
    jitter: bool = False             # task release offsets within one period
    pattern: str = "spread"          # where jobs place their memory accesses
    jobs: int = 2                    # measured jobs per task
    max_events: int = 2_000_000

    def __post_init__(self):
        if self.phantom_load not in PHANTOM_LOADS:
            raise DomainError(f"unknown phantom load {self.phantom_load!r}")
        if self.pattern not in PATTERNS and self.pattern != "mix":
            raise DomainError(f"unknown access pattern {self.pattern!r}")
        if self.jobs < 1:
            raise DomainError("jobs must be >= 1")

    def replay_doc(self) -> dict:
        return {
            "seed": self.seed,
            "phantom_load": self.phantom_load,
            "jitter": self.jitter,
            "pattern": self.pattern,
            "jobs": self.jobs,
        }


@dataclass
class TrialResult:
    responses: dict[str, list[int]]              # task id -> per-job times
    traversals: dict[InstanceKey, list[int]]     # transfer -> per-packet times
    events: int = 0
    makespan: int = 0                            # last recorded completion


@dataclass
class SweepResult:
    trials: int
    samples: dict = field(default_factory=dict)        # id -> observations
    worst: dict = field(default_factory=dict)          # id -> max observed
    bounds: dict = field(default_factory=dict)         # id -> checked bound
    margins: dict = field(default_factory=dict)        # id -> bound - worst

    def rows(self) -> list[dict]:
        out = []
        for key in self.bounds:
            kind = "task" if isinstance(key, str) else "transfer"
            name = key if isinstance(key, str) else f"{key[0]}->{key[1]}"
            out.append(
                {
                    "kind": kind,
                    "id": name,
                    "bound_ns": self.bounds[key],
                    "worst_ns": self.worst[key],
                    "margin_ns": self.margins[key],
                    "samples": self.samples[key],
                }
            )
        return out


# ------------------------------------------------------------------- engine


class _Engine:
    __slots__ = ("heap", "now", "count", "cap", "seq")

    def __init__(self, cap: int):
        self.heap: list = []
        self.now = 0
        self.count = 0
        self.cap = cap
        self.seq = 0

    def push(self, t: int, fn: Callable[[int], None]) -> None:
        heapq.heappush(self.heap, (t, self.seq, fn))
        self.seq += 1

    def run(self) -> None:
        while self.heap:
            t, _, fn = heapq.heappop(self.heap)
            self.now = t
            self.count += 1
            if self.count > self.cap:
                raise SimHorizonExceeded(f"more than {self.cap} events")
            fn(t)


class _SlotArbiter:
    """Rotating slot owner table, one grant per slot.

    Work-conserving: an idle owner's slot is skipped in zero time and the
    switch delay is charged only when ownership changes hands. Otherwise
    the table is a fixed wall-clock timetable whose idle slots burn time.
    Rotation is simulated only while real work is pending.
    """

    def __init__(
        self,
        eng: _Engine,
        rng: Random,
        slots: list[str],
        slot_len: int,
        delay: int,
        work_conserving: bool,
        pending: Callable[[str, int], bool],
        grant: Callable[[str, int, int], None],
        any_real: Callable[[], bool],
        phantom_busy: Callable[[], bool],
    ):
        if not slots:
            raise DomainError("arbiter with an empty slot table")
        self.eng = eng
        self.rng = rng
        self.slots = slots
        self.slot_len = slot_len
        self.delay = delay
        self.work_conserving = work_conserving
        self.pending = pending
        self.grant = grant
        self.any_real = any_real
        self.phantom_busy = phantom_busy
        self.idx = 0
        self.last: str | None = None
        self.sleeping = True

    def kick(self, t: int) -> None:
        if not self.sleeping:
            return
        self.sleeping = False
        if self.work_conserving:
            self.idx = self.rng.randrange(len(self.slots))
            self.eng.push(t, self._advance)
        else:
            span = self.slot_len + self.delay
            self.eng.push(-(-t // span) * span, self._advance)

    def _busy(self, owner, t: int) -> bool:
        if _is_phantom(owner):
            return self.phantom_busy()
        return self.pending(owner, t)

    def _advance(self, t: int) -> None:
        if not self.any_real():
            self.sleeping = True
            return
        if self.work_conserving:
            for _ in range(len(self.slots)):
                owner = self.slots[self.idx]
                self.idx = (self.idx + 1) % len(self.slots)
                if self._busy(owner, t):
                    d = self.delay if (self.last is not None and owner != self.last) else 0
                    self.last = owner
                    start = t + d
                    self.eng.push(start + self.slot_len, self._advance)
                    self.grant(owner, start, start + self.slot_len)
                    return
            if self.any_real():
                raise RuntimeError("arbiter stalled with real work pending")
            self.sleeping = True
        else:
            span = self.slot_len + self.delay
            owner = self.slots[(t // span) % len(self.slots)]
            self.eng.push(t + span, self._advance)
            if self._busy(owner, t):
                self.last = owner
                self.grant(owner, t + self.delay, t + span)


class _LinkArbiter:
    """One directed mesh link: one flit per cycle to the granted owner."""

    def __init__(self, eng, rng, slots, cycle, work_conserving, grant, phantom_busy):
        self.eng = eng
        self.rng = rng
        self.slots = slots
        self.cycle = cycle
        self.work_conserving = work_conserving
        self.grant = grant
        self.phantom_busy = phantom_busy
        self.queues: dict[str, deque] = {}
        self.idx = 0
        self.sleeping = True

    def enqueue(self, flow, flit, t: int) -> None:
        self.queues.setdefault(flow, deque()).append(flit)
        if self.sleeping:
            self.sleeping = False
            if self.work_conserving:
                self.idx = self.rng.randrange(len(self.slots))
                self.eng.push(t, self._advance)
            else:
                self.eng.push(-(-t // self.cycle) * self.cycle, self._advance)

    def _busy(self, owner) -> bool:
        if _is_phantom(owner):
            return self.phantom_busy()
        q = self.queues.get(owner)
        return bool(q)

    def _advance(self, t: int) -> None:
        if not any(self.queues.values()):
            self.sleeping = True
            return
        if self.work_conserving:
            for _ in range(len(self.slots)):
                owner = self.slots[self.idx]
                self.idx = (self.idx + 1) % len(self.slots)
                if self._busy(owner):
                    self.eng.push(t + self.cycle, self._advance)
                    if not _is_phantom(owner):
                        self.grant(self.queues[owner].popleft(), t)
                    return
            self.sleeping = True
        else:
            owner = self.slots[(t // self.cycle) % len(self.slots)]
            self.eng.push(t + self.cycle, self._advance)
            if self._busy(owner) and not _is_phantom(owner):
                self.grant(self.queues[owner].popleft(), t)


# ------------------------------------------------------------------ entities


class _Job:
    __slots__ = (
        "task_id", "release", "wcet", "offsets", "served", "exec_done",
        "seg_start", "window_end", "outstanding", "done_at", "emits",
    )

    def __init__(self, task_id, release, wcet, offsets, emits):
        self.task_id = task_id
        self.release = release
        self.wcet = wcet
        self.offsets = offsets          # sorted exec points of the accesses
        self.served = 0
        self.exec_done = 0
        self.seg_start = -1             # -1: not executing right now
        self.window_end = -1
        self.outstanding = False
        self.done_at = -1
        self.emits = emits              # instance keys to packetize on completion


class _Packet:
    __slots__ = ("key", "release", "words", "fetched", "written", "flits",
                 "links", "injected")

    def __init__(self, key, release, words, flits, links):
        self.key = key
        self.release = release
        self.words = words
        self.fetched = 0
        self.written = 0
        self.flits = flits
        self.links = links
        self.injected = -1


class _Unit:
    """TX or RX adapter: windows granted per transfer over the tile bus."""

    def __init__(self):
        self.flows: dict[InstanceKey, deque[_Packet]] = {}
        self.current: tuple[object, int] | None = None   # flow, window end
        self.arbiter: _SlotArbiter | None = None

    def active_flow(self, t: int) -> InstanceKey | None:
        if self.current is not None:
            flow, until = self.current
            if t < until and self.flows.get(flow):
                return flow
        return None

    def phantom_window(self, t: int) -> bool:
        """Background transfer window: its words contend on the bus too."""
        if self.current is None:
            return False
        flow, until = self.current
        return t < until and _is_phantom(flow)


# ----------------------------------------------------------------- scenario


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise DomainError(f"unsupported platform for simulation: {what}")


def _check_platform(spec: ProblemSpec) -> None:
    tau = spec.architecture.noc.tau
    _require(spec.architecture.noc.link_policy.arb_delay == 0,
             "link arbitration delay must be 0")

    def grid(v: int, what: str) -> None:
        _require(v % tau == 0, f"{what} not a multiple of the link cycle")

    for tile in spec.architecture.tiles:
        st = tile.memory.service_time
        _require(tile.bus_policy.slot_len == st,
                 f"bus slot != memory service time on {tile.id}")
        grid(st, f"service time on {tile.id}")
        grid(tile.bus_policy.arb_delay, f"bus delay on {tile.id}")
        core = tile.cores[0].policy
        grid(core.slot_len, f"core slot on {tile.id}")
        grid(core.arb_delay, f"core delay on {tile.id}")
        grid(tile.tx_policy.arb_delay, f"tx delay on {tile.id}")
        grid(tile.rx_policy.arb_delay, f"rx delay on {tile.id}")
    for t in spec.application.tasks:
        grid(t.period, f"period of {t.id}")
        for v in t.wcet.values():
            grid(v, f"execution time of {t.id}")
    producers = {t.id: t for t in spec.application.tasks}
    for m in spec.application.messages:
        grid(m.period, f"period of {m.id}")
        _require(m.period % producers[m.src].period == 0,
                 f"{m.id} period not a multiple of its producer's")


def _draw_offsets(rng: Random, pattern: str, wcet: int, md: int, tau: int) -> tuple:
    if md == 0:
        return ()
    if pattern == "front":
        return (0,) * md
    if pattern == "back":
        return (wcet,) * md
    if pattern == "spread":
        return tuple(wcet * (i + 1) // (md + 1) // tau * tau for i in range(md))
    return tuple(sorted(rng.randrange(wcet // tau + 1) * tau for _ in range(md)))


class _Sim:
    def __init__(self, spec: ProblemSpec, mapping: MappingResult, cfg: TrialConfig):
        if not mapping.feasible or mapping.tuples is None:
            raise ValueError("simulation needs a feasible, fully budgeted mapping")
        _check_platform(spec)
        self.spec = spec
        self.mapping = mapping
        self.cfg = cfg
        self.rng = Random(cfg.seed)
        self.eng = _Engine(cfg.max_events)
        self.arch = spec.architecture
        self.tau = self.arch.noc.tau
        self.result = TrialResult(responses={}, traversals={})

        self.eff_md = effective_mem_demand(
            spec.application, mapping.bindings,
            lambda c: self.arch.tile_of_core(c).id,
        )
        self.instances = {i.key: i for i in mapping.instances}
        self.job_queues: dict[str, deque[_Job]] = {t.id: deque() for t in spec.application.tasks}
        self.word_queues: dict[str, deque[_Job]] = {}   # bus master id -> stalled jobs
        self.core_arbiters: dict[str, _SlotArbiter] = {}
        self.bus_arbiters: dict[str, _SlotArbiter] = {}
        self.tx_units: dict[str, _Unit] = {}
        self.rx_units: dict[str, _Unit] = {}
        self.links: dict[str, _LinkArbiter] = {}
        self.service: dict[str, int] = {}               # tile -> word service time
        self._build()
        self._release_jobs()

    # -- construction

    def _phantom_busy(self) -> bool:
        if self.cfg.phantom_load == "max":
            return True
        if self.cfg.phantom_load == "none":
            return False
        return self.rng.random() < 0.7

    def _fill(self, slots: list[str], capacity: int) -> list[str]:
        free = capacity - len(slots)
        if free < 0:
            raise DomainError("slot table exceeds its arbiter capacity")
        return slots + [f"{PHANTOM}{i}" for i in range(free)]

    def _build(self) -> None:
        arch, mp = self.arch, self.mapping
        tuples = mp.tuples
        tasks_on_core: dict[str, list[str]] = {}
        for t in self.spec.application.tasks:
            tasks_on_core.setdefault(mp.bindings[t.id], []).append(t.id)
        out_of, in_of = {}, {}
        for inst in mp.instances:
            out_of.setdefault(inst.src_tile, []).append(inst)
            in_of.setdefault(inst.dst_tile, []).append(inst)
        weights = mp.budget.task_weights
        msg_weights = mp.budget.message_weights

        for tile in arch.tiles:
            reserved = tile.id in mp.reserved_tiles
            self.service[tile.id] = tile.memory.service_time
            hosting = [c for c in tile.cores if c.id in tasks_on_core]
            outbound = out_of.get(tile.id, [])
            inbound = in_of.get(tile.id, [])
            if not hosting and not outbound and not inbound:
                continue

            # cores
            for core in hosting:
                own = [t for t in tasks_on_core[core.id] for _ in range(weights[t])]
                table = self._fill(own, tuples.core_capacity[core.id])
                pol = core.policy
                self.core_arbiters[core.id] = _SlotArbiter(
                    self.eng, self.rng, table, pol.slot_len, pol.arb_delay,
                    pol.work_conserving,
                    pending=lambda o, t, q=self.job_queues: bool(q[o]),
                    grant=self._core_grant,
                    any_real=lambda q=self.job_queues, owners=tasks_on_core[core.id]:
                        any(q[o] for o in owners),
                    phantom_busy=self._phantom_busy,
                )

            # tile bus: per-core masters, then TX, then RX. Idle-core slots
            # on reserved tiles either vanish (work-conserving) or stay as
            # inert owners; adversaries exist on shared tiles only.
            w = tile.bus_master_weight
            table = []
            for core in tile.cores:
                if core.id in tasks_on_core:
                    table += [f"c:{core.id}"] * w
                    self.word_queues[f"c:{core.id}"] = deque()
                elif reserved:
                    if not tile.bus_policy.work_conserving:
                        table += [f"i:{core.id}"] * w
                else:
                    table += [f"{PHANTOM}c{core.id}"] * w
            tx_owner = f"t:{tile.id}" if (outbound or reserved) else f"{PHANTOM}t"
            rx_owner = f"r:{tile.id}" if (inbound or reserved) else f"{PHANTOM}r"
            table += [tx_owner] * w + [rx_owner] * w
            if len(table) != tuples.bus_capacity[tile.id]:
                raise DomainError("bus table does not match the refined capacity")
            pol = tile.bus_policy
            self.bus_arbiters[tile.id] = _SlotArbiter(
                self.eng, self.rng, table, pol.slot_len, pol.arb_delay,
                pol.work_conserving,
                pending=self._bus_pending,
                grant=self._bus_grant,
                any_real=lambda tid=tile.id: self._bus_any_real(tid),
                phantom_busy=self._phantom_busy,
            )

            # adapter units: slot spans one refined bus arbitration period
            if outbound:
                unit = _Unit()
                flows = [i.key for i in outbound for _ in range(msg_weights[i.key])]
                pol_u = tile.tx_policy
                cap = (sum(msg_weights[i.key] for i in outbound)
                       if reserved and pol_u.work_conserving else pol_u.capacity)
                slot = tuples.tx_bus[tile.id].period
                unit.arbiter = _SlotArbiter(
                    self.eng, self.rng, self._fill_flows(flows, cap),
                    slot, pol_u.arb_delay, pol_u.work_conserving,
                    pending=lambda o, t, u=unit: bool(u.flows.get(o)),
                    grant=lambda o, s, e, u=unit, tid=tile.id: self._unit_grant(u, tid, o, s, e),
                    any_real=lambda u=unit: any(u.flows.values()),
                    phantom_busy=self._phantom_busy,
                )
                for inst in outbound:
                    unit.flows[inst.key] = deque()
                self.tx_units[tile.id] = unit
            if inbound:
                unit = _Unit()
                flows = [i.key for i in inbound for _ in range(msg_weights[i.key])]
                pol_u = tile.rx_policy
                cap = (sum(msg_weights[i.key] for i in inbound)
                       if reserved and pol_u.work_conserving else pol_u.capacity)
                slot = tuples.rx_bus[tile.id].period
                unit.arbiter = _SlotArbiter(
                    self.eng, self.rng, self._fill_flows(flows, cap),
                    slot, pol_u.arb_delay, pol_u.work_conserving,
                    pending=lambda o, t, u=unit: bool(u.flows.get(o)),
                    grant=lambda o, s, e, u=unit, tid=tile.id: self._unit_grant(u, tid, o, s, e),
                    any_real=lambda u=unit: any(u.flows.values()),
                    phantom_busy=self._phantom_busy,
                )
                for inst in inbound:
                    unit.flows[inst.key] = deque()
                self.rx_units[tile.id] = unit

        # mesh links
        lp = arch.noc.link_policy
        flows_on_link: dict[str, list[InstanceKey]] = {}
        for inst in mp.instances:
            for link in inst.links:
                flows_on_link.setdefault(link, []).extend(
                    [inst.key] * msg_weights[inst.key]
                )
        for link_id, flows in flows_on_link.items():
            self.links[link_id] = _LinkArbiter(
                self.eng, self.rng, self._fill_flows(flows, lp.capacity),
                self.tau, lp.work_conserving,
                grant=lambda flit, t, lid=link_id: self._link_grant(lid, flit, t),
                phantom_busy=self._phantom_busy,
            )

    def _fill_flows(self, flows: list[InstanceKey], capacity: int) -> list:
        free = capacity - len(flows)
        if free < 0:
            raise DomainError("flow table exceeds its arbiter capacity")
        return flows + [f"{PHANTOM}{i}" for i in range(free)]

    # -- job lifecycle

    def _release_jobs(self) -> None:
        app = self.spec.application
        producers: dict[str, list] = {t.id: [] for t in app.tasks}
        for inst in self.mapping.instances:
            producers[inst.message.src].append(inst)
        for t in app.tasks:
            core = self.arch.core(self.mapping.bindings[t.id])
            wcet = t.wcet[core.core_type]
            md = self.eff_md[t.id]
            offset = (
                self.rng.randrange(t.period // self.tau) * self.tau
                if self.cfg.jitter else 0
            )
            pattern = (
                self.rng.choice(PATTERNS) if self.cfg.pattern == "mix"
                else self.cfg.pattern
            )
            n_jobs = self.cfg.jobs
            for inst in producers[t.id]:
                n_jobs = max(n_jobs, self.cfg.jobs * (inst.message.period // t.period))
            self.result.responses[t.id] = []
            for k in range(n_jobs):
                emits = tuple(
                    inst.key for inst in producers[t.id]
                    if (k * t.period) % inst.message.period == 0
                )
                job = _Job(
                    t.id, offset + k * t.period, wcet,
                    _draw_offsets(self.rng, pattern, wcet, md, self.tau), emits,
                )
                self.eng.push(job.release, lambda now, j=job: self._release(j, now))
        for inst in self.mapping.instances:
            self.result.traversals[inst.key] = []

    def _release(self, job: _Job, t: int) -> None:
        self.job_queues[job.task_id].append(job)
        self.core_arbiters[self.mapping.bindings[job.task_id]].kick(t)

    def _core_grant(self, task_id: str, start: int, end: int) -> None:
        if _is_phantom(task_id):
            return
        q = self.job_queues[task_id]
        if not q:
            return
        job = q[0]
        job.window_end = end
        # An in-flight segment event (seg_start >= 0) will pick the new
        # window up itself; restarting here would lose its progress.
        if not job.outstanding and job.seg_start < 0:
            self._run_segment(job, start)

    def _run_segment(self, job: _Job, t: int) -> None:
        if job.served < len(job.offsets) and job.offsets[job.served] <= job.exec_done:
            job.outstanding = True
            core_id = self.mapping.bindings[job.task_id]
            self.word_queues[f"c:{core_id}"].append(job)
            tile_id = self.arch.core(core_id).tile_id
            self.bus_arbiters[tile_id].kick(t)
            return
        if job.exec_done >= job.wcet:
            self._finish(job, t)
            return
        nxt = job.offsets[job.served] if job.served < len(job.offsets) else job.wcet
        stop = min(t + (nxt - job.exec_done), job.window_end)
        job.seg_start = t
        self.eng.push(stop, lambda now, j=job, s=job.seg_start: self._segment_end(j, s, now))

    def _segment_end(self, job: _Job, seg_start: int, t: int) -> None:
        if job.seg_start != seg_start or job.done_at >= 0:
            return                      # stale event from an earlier window
        job.exec_done += t - seg_start
        job.seg_start = -1
        if t < job.window_end:
            self._run_segment(job, t)

    def _word_done(self, job: _Job, t: int) -> None:
        job.served += 1
        job.outstanding = False
        if job.exec_done >= job.wcet and job.served == len(job.offsets):
            self._finish(job, t)
            return
        if t < job.window_end:
            self._run_segment(job, t)

    def _finish(self, job: _Job, t: int) -> None:
        job.done_at = t
        job.seg_start = -2
        self.result.responses[job.task_id].append(t - job.release)
        self.result.makespan = max(self.result.makespan, t)
        q = self.job_queues[job.task_id]
        q.popleft()
        for key in job.emits:
            self._emit_packet(key, t)
        if q and t < job.window_end:
            nxt = q[0]
            nxt.window_end = job.window_end
            if not nxt.outstanding:
                self._run_segment(nxt, t)

    # -- bus

    def _bus_pending(self, owner: str, t: int) -> bool:
        if owner.startswith("c:"):
            return bool(self.word_queues[owner])
        if owner.startswith("t:"):
            unit = self.tx_units.get(owner[2:])
        elif owner.startswith("r:"):
            unit = self.rx_units.get(owner[2:])
        else:
            return False
        if unit is None:
            return False
        return unit.active_flow(t) is not None or unit.phantom_window(t)

    def _bus_any_real(self, tile_id: str) -> bool:
        tile = self.arch.tile(tile_id)
        for core in tile.cores:
            if self.word_queues.get(f"c:{core.id}"):
                return True
        tx = self.tx_units.get(tile_id)
        if tx and tx.active_flow(self.eng.now) is not None:
            return True
        rx = self.rx_units.get(tile_id)
        if rx and rx.active_flow(self.eng.now) is not None:
            return True
        return False

    def _bus_grant(self, owner: str, start: int, end: int) -> None:
        if _is_phantom(owner):
            return
        if owner.startswith("c:"):
            st = self.service[self.arch.core(owner[2:]).tile_id]
            job = self.word_queues[owner].popleft()
            self.eng.push(start + st, lambda now, j=job: self._word_done(j, now))
            return
        tile_id = owner[2:]
        st = self.service[tile_id]
        unit = self.tx_units[tile_id] if owner.startswith("t:") else self.rx_units[tile_id]
        flow = unit.active_flow(start)
        if flow is None:
            return          # background window, or the window just lapsed
        packet = unit.flows[flow][0]
        if owner.startswith("t:"):
            packet.fetched += 1
            if packet.fetched == packet.words:
                unit.flows[flow].popleft()
                self.eng.push(start + st, lambda now, p=packet: self._inject(p, now))
        else:
            packet.written += 1
            if packet.written == packet.words:
                unit.flows[flow].popleft()
                self.eng.push(start + st, lambda now, p=packet: self._delivered(p, now))

    def _unit_grant(self, unit: _Unit, tile_id: str, flow, start: int, end: int) -> None:
        unit.current = (flow, end)
        if not _is_phantom(flow):
            self.bus_arbiters[tile_id].kick(start)

    # -- transfers

    def _emit_packet(self, key: InstanceKey, t: int) -> None:
        inst = self.instances[key]
        packet = _Packet(
            key, t, inst.message.mem_demand,
            self.arch.noc.flits_for(inst.message.payload_bytes), inst.links,
        )
        unit = self.tx_units[inst.src_tile]
        unit.flows[key].append(packet)
        unit.arbiter.kick(t)

    def _inject(self, packet: _Packet, t: int) -> None:
        packet.injected = t
        for i in range(packet.flits):
            self.links[packet.links[0]].enqueue(packet.key, (packet, i), t)

    def _link_grant(self, link_id: str, flit, t: int) -> None:
        packet, idx = flit
        pos = packet.links.index(link_id)
        arrive = t + self.arch.noc.router_delay * self.tau
        if pos + 1 < len(packet.links):
            nxt = packet.links[pos + 1]
            self.eng.push(
                arrive, lambda now, f=flit, l=nxt: self.links[l].enqueue(f[0].key, f, now)
            )
        elif idx == packet.flits - 1:
            self.eng.push(arrive, lambda now, p=packet: self._arrived(p, now))

    def _arrived(self, packet: _Packet, t: int) -> None:
        inst = self.instances[packet.key]
        unit = self.rx_units[inst.dst_tile]
        unit.flows[packet.key].append(packet)
        unit.arbiter.kick(t)

    def _delivered(self, packet: _Packet, t: int) -> None:
        self.result.traversals[packet.key].append(t - packet.release)
        self.result.makespan = max(self.result.makespan, t)

    def run(self) -> TrialResult:
        self.eng.run()
        self.result.events = self.eng.count
        return self.result


def simulate(spec: ProblemSpec, mapping: MappingResult, config: TrialConfig) -> TrialResult:
    """Execute one adversarial trial of a feasible mapping."""
    return _Sim(spec, mapping, config).run()


# -------------------------------------------------------------------- sweep


def adversarial_sweep(
    spec: ProblemSpec,
    mapping: MappingResult,
    trials: int,
    seed: int = 0,
    bound_overrides: dict | None = None,
    phantom_load: str | None = None,
    jobs: int = 2,
) -> SweepResult:
    """Run randomized adversarial trials and compare against the bounds.

    Raises BoundViolation (carrying a replayable scenario) the moment any
    observed response or traversal exceeds its bound.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    bounds: dict = {}
    bounds.update(mapping.task_wcrt)
    bounds.update(mapping.transfer_wctt)
    if bound_overrides:
        bounds.update(bound_overrides)
    sweep = SweepResult(trials=trials)
    for key, bound in bounds.items():
        sweep.bounds[key] = bound
        sweep.worst[key] = 0
        sweep.samples[key] = 0

    rng = Random(seed)
    for i in range(trials):
        cfg = TrialConfig(
            seed=rng.getrandbits(48),
            phantom_load=phantom_load or ("max" if i % 2 == 0 else rng.choice(PHANTOM_LOADS)),
            jitter=bool(rng.getrandbits(1)),
            pattern="mix" if i % 4 == 3 else rng.choice(PATTERNS),
            jobs=jobs,
        )
        result = simulate(spec, mapping, cfg)
        observations: list[tuple] = [
            (key, obs) for key, vals in result.responses.items() for obs in vals
        ] + [
            (key, obs) for key, vals in result.traversals.items() for obs in vals
        ]
        for key, obs in observations:
            if key not in sweep.bounds:
                continue
            sweep.samples[key] += 1
            if obs > sweep.worst[key]:
                sweep.worst[key] = obs
            if obs > sweep.bounds[key]:
                name = key if isinstance(key, str) else f"{key[0]}->{key[1]}"
                raise BoundViolation(
                    f"{name}: observed {obs} ns exceeds bound {sweep.bounds[key]} ns "
                    f"in trial {i}",
                    replay={"trial": i, "id": name, "observed": obs,
                            "bound": sweep.bounds[key], **cfg.replay_doc()},
                )
    for key in sweep.bounds:
        sweep.margins[key] = sweep.bounds[key] - sweep.worst[key]
    return sweep
