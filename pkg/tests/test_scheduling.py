"""Budgeting: delay extensions, minimal weights, feasibility, refinement."""

import json
from dataclasses import dataclass

import pytest

from isoexplore import kernels
from isoexplore.arbitration import ArbitrationTuple
from isoexplore.errors import Infeasible
from isoexplore.model import Message, parse_spec
from isoexplore.scheduling import (
    BudgetAssignment,
    bus_master_tuple,
    check_feasibility,
    extended_bus_policy,
    extended_core_policy,
    min_message_weight,
    min_task_weight,
    refine_tuples,
)


def make_spec(*, work_conserving=True, bus_capacity=4, core_capacity=5):
    doc = {
        "application": {
            "tasks": [
                {"id": "a", "period_us": 50, "wcet_us": {"gp": 3}, "mem_demand": 8},
                {"id": "b", "period_us": 50, "wcet_us": {"gp": 2}, "mem_demand": 4},
            ],
            "messages": [
                {"id": "m", "src": "a", "dst": "b", "period_us": 100,
                 "payload_bytes": 32, "mem_demand": 6},
            ],
        },
        "architecture": {
            "mesh": [2, 1],
            "tile_types": [
                {
                    "name": "basic",
                    "cores": 2,
                    "core_type": "gp",
                    "core_policy": {"slot_len_us": 1000, "arb_delay_us": 200,
                                    "capacity": core_capacity,
                                    "work_conserving": work_conserving},
                    "bus_policy": {"slot_len_ns": 100, "arb_delay_ns": 0,
                                   "capacity": bus_capacity,
                                   "work_conserving": work_conserving},
                    "na": {
                        "tx": {"arb_delay_ns": 0, "capacity": 4,
                               "work_conserving": work_conserving},
                        "rx": {"arb_delay_ns": 0, "capacity": 4,
                               "work_conserving": work_conserving},
                    },
                    "memories": [{"service_time_ns": 5}],
                },
            ],
            "tiles": [
                {"id": "t0", "type": "basic", "pos": [0, 0]},
                {"id": "t1", "type": "basic", "pos": [1, 0]},
            ],
            "noc": {
                "tau_ns": 10,
                "router_delay_cycles": 1,
                "flit_payload_bytes": 16,
                "header_flits": 1,
                "link_policy": {"slot_len": 10, "arb_delay": 0,
                                "capacity": 4, "work_conserving": work_conserving},
            },
        },
        "mapping_edges": [
            {"task": "a", "core": "t0.c0"},
            {"task": "b", "core": "t1.c1"},
        ],
    }
    return parse_spec(json.dumps(doc))


@dataclass
class Inst:
    """Just the routed-transfer attributes the budgeting layer reads."""

    message: Message
    consumer: str
    src_tile: str
    dst_tile: str
    links: tuple[str, ...]


def make_inst(spec, links=("0,0->1,0",)):
    return Inst(spec.application.messages[0], "b", "t0", "t1", tuple(links))


# ----------------------------------------------------------- policy extension


def test_extended_policies_absorb_memory_service():
    spec = make_spec()
    tile = spec.architecture.tile("t0")
    bus = extended_bus_policy(tile)
    assert bus.arb_delay == tile.bus_policy.arb_delay + 5
    assert (bus.slot_len, bus.capacity) == (100, 4)
    core = extended_core_policy(tile)
    assert core.arb_delay == tile.cores[0].policy.arb_delay + 5
    assert core.slot_len == tile.cores[0].policy.slot_len


def test_bus_master_tuple_uses_extended_delay():
    tile = make_spec().architecture.tile("t0")
    t = bus_master_tuple(tile)
    assert t == ArbitrationTuple(100, 1, 4 * 105)
    assert bus_master_tuple(tile, 2) == ArbitrationTuple(100, 1, 2 * 105)


# ------------------------------------------------------------ minimal weights


def task_response_at(w, wcet, md, tile):
    bus = bus_master_tuple(tile)
    core = extended_core_policy(tile)
    return kernels.task_response(
        wcet, md, tile.memory.service_time,
        bus.slot_len, bus.weight, bus.period,
        core.slot_len, w, core.capacity * (core.slot_len + core.arb_delay),
    )


def test_min_task_weight_is_minimal():
    spec = make_spec()
    tile = spec.architecture.tile("t0")
    wcet, md = 3_000_000, 8
    deadline = 9_500_000
    w = min_task_weight(deadline, wcet, md, tile)
    assert task_response_at(w, wcet, md, tile) <= deadline
    if w > 1:
        assert task_response_at(w - 1, wcet, md, tile) > deadline


def test_min_task_weight_infeasible():
    tile = make_spec().architecture.tile("t0")
    with pytest.raises(Infeasible):
        min_task_weight(1_000, 3_000_000, 8, tile)


def test_min_message_weight_is_minimal():
    spec = make_spec()
    src, dst = spec.architecture.tile("t0"), spec.architecture.tile("t1")
    noc = spec.architecture.noc
    flits = noc.flits_for(32)
    deadline = 40_000
    w = min_message_weight(deadline, 6, flits, 2, src, dst, noc)

    def traversal(weight):
        from isoexplore.timing import MessageTimingInputs, wctt
        from isoexplore.arbitration import make_tuple
        bus = bus_master_tuple(src)
        unit_period = src.tx_policy.capacity * bus.period
        return wctt(MessageTimingInputs(
            mem_demand=6, flits=flits, hops=2, router_delay=1, tau=10,
            src_service_time=5, src_bus_tuple=bus,
            tx_tuple=ArbitrationTuple(bus.period, weight, unit_period),
            route_tuple=make_tuple(noc.link_policy, weight),
            dst_service_time=5, dst_bus_tuple=bus_master_tuple(dst),
            rx_tuple=ArbitrationTuple(bus.period, weight, unit_period),
        ))

    assert traversal(w) <= deadline
    if w > 1:
        assert traversal(w - 1) > deadline


def test_min_message_weight_infeasible():
    spec = make_spec()
    src, dst = spec.architecture.tile("t0"), spec.architecture.tile("t1")
    with pytest.raises(Infeasible):
        min_message_weight(10, 6, 3, 2, src, dst, spec.architecture.noc)


# ---------------------------------------------------------------- feasibility


def test_check_feasibility_accepts_fitting_budgets():
    spec = make_spec()
    inst = make_inst(spec)
    res = check_feasibility(spec, {"a": "t0.c0", "b": "t1.c1"}, [inst],
                            {"a": 3, "b": 2}, {("m", "b"): 4})
    assert isinstance(res, BudgetAssignment)
    assert res.feasible and res.reason is None
    assert res.task_weights == {"a": 3, "b": 2}


def test_check_feasibility_core_overload():
    spec = make_spec()
    res = check_feasibility(spec, {"a": "t0.c0", "b": "t0.c0"}, [],
                            {"a": 3, "b": 3}, {})
    assert not res.feasible
    assert res.reason == "core t0.c0 overloaded: 6 > 5"


@pytest.mark.parametrize(
    "weight, kind", [(5, "tx t0"), (5, "rx t1"), (5, "link 0,0->1,0")]
)
def test_check_feasibility_transfer_overload(weight, kind):
    spec = make_spec()
    inst = make_inst(spec)
    res = check_feasibility(spec, {"a": "t0.c0", "b": "t1.c1"}, [inst],
                            {"a": 1, "b": 1}, {("m", "b"): weight})
    assert not res.feasible
    assert "overloaded" in res.reason


def test_check_feasibility_link_overload_is_per_link():
    spec = make_spec()
    a = make_inst(spec)
    b = Inst(Message(id="m2", src="b", dst="a", period=100_000,
                     payload_bytes=16, mem_demand=2),
             "a", "t1", "t0", ("1,0->0,0",))
    res = check_feasibility(spec, {"a": "t0.c0", "b": "t1.c1"}, [a, b],
                            {"a": 1, "b": 1}, {("m", "b"): 3, ("m2", "a"): 3})
    assert res.feasible                     # opposite directions never collide


# ----------------------------------------------------------------- refinement


def refined(spec, **kw):
    inst = make_inst(spec)
    return refine_tuples(
        spec, {"a": "t0.c0", "b": "t1.c1"}, [inst],
        {"a": 2, "b": 1}, {("m", "b"): 1}, **kw,
    )


def test_refine_defaults_keep_full_capacity():
    spec = make_spec()
    ts = refined(spec)
    assert ts.bus_capacity == {"t0": 4, "t1": 4}
    assert ts.core_capacity == {"t0.c0": 5, "t1.c1": 5}
    assert ts.core_bus["t0.c0"] == ArbitrationTuple(100, 1, 420)
    assert ts.tx_bus["t0"] == ArbitrationTuple(100, 1, 420)
    assert ts.rx_bus["t1"] == ArbitrationTuple(100, 1, 420)
    core = extended_core_policy(spec.architecture.tile("t0"))
    assert ts.core["a"] == ArbitrationTuple(
        core.slot_len, 2, 5 * (core.slot_len + core.arb_delay))
    # Adapter slots equal the extended bus period of their side.
    assert ts.tx[("m", "b")] == ArbitrationTuple(420, 1, 4 * 420)
    assert ts.rx[("m", "b")] == ArbitrationTuple(420, 1, 4 * 420)
    assert ts.route[("m", "b")] == ArbitrationTuple(10, 1, 40)


def test_refine_exclusive_core_shrinks_cycle():
    spec = make_spec()
    ts = refined(spec, exclusive_cores={"t0.c0"})
    core = extended_core_policy(spec.architecture.tile("t0"))
    assert ts.core_capacity["t0.c0"] == 2
    assert ts.core["a"].period == 2 * (core.slot_len + core.arb_delay)
    assert ts.core["a"].wait_time() == 2 * core.arb_delay  # only the handoffs
    assert ts.core_capacity["t1.c1"] == 5   # untouched elsewhere


def test_refine_reserved_tile_drops_idle_bus_slots():
    spec = make_spec()
    ts = refined(spec, reserved_tiles={"t0"})
    # One of two cores hosts nothing: one master slot leaves the cycle.
    assert ts.bus_capacity["t0"] == 3
    assert ts.core_bus["t0.c0"].period == 3 * 105
    assert ts.tx_bus["t0"].period == 3 * 105
    # TX cycle shrinks to allocated traffic; slots follow the shorter bus.
    assert ts.tx[("m", "b")] == ArbitrationTuple(315, 1, 315)
    # Destination tile is untouched.
    assert ts.bus_capacity["t1"] == 4
    assert ts.rx[("m", "b")].period == 4 * 420


def test_refine_never_shrinks_links():
    spec = make_spec()
    ts = refined(spec, reserved_tiles={"t0", "t1"}, exclusive_cores={"t0.c0"})
    assert ts.route[("m", "b")] == ArbitrationTuple(10, 1, 40)


def test_refine_ignores_reductions_without_work_conservation():
    spec = make_spec(work_conserving=False)
    ts = refined(spec, reserved_tiles={"t0", "t1"}, exclusive_cores={"t0.c0"})
    assert ts.bus_capacity == {"t0": 4, "t1": 4}
    assert ts.core_capacity["t0.c0"] == 5
    assert ts.tx[("m", "b")].period == 4 * 420
    assert ts.rx[("m", "b")].period == 4 * 420


def test_refine_reduction_tightens_every_wait():
    spec = make_spec()
    base = refined(spec)
    tight = refined(spec, reserved_tiles={"t0"}, exclusive_cores={"t0.c0"})
    assert tight.core["a"].wait_time() <= base.core["a"].wait_time()
    assert tight.core_bus["t0.c0"].wait_time() <= base.core_bus["t0.c0"].wait_time()
    assert tight.tx[("m", "b")].wait_time() <= base.tx[("m", "b")].wait_time()
