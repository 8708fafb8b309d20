"""Adversarial discrete-event replay of the analytic bounds."""

import json

import pytest

from isoexplore import generate_spec
from isoexplore.errors import BoundViolation, DomainError
from isoexplore.mapping import from_bindings, random_genotype, decode
from isoexplore.model import parse_spec
from isoexplore.simoracle import (
    TrialConfig,
    adversarial_sweep,
    simulate,
)

from conftest import bundled_text
from random import Random

SHARED = {"t0": "t0_0.c0", "t1": "t1_0.c0", "t2": "t0_0.c1"}


def edited_spec(edit):
    doc = json.loads(bundled_text("specs", "join_two_tile.json"))
    edit(doc)
    return parse_spec(json.dumps(doc))


# --------------------------------------------------------------------- config


def test_trial_config_validation():
    TrialConfig(seed=1)                              # defaults are valid
    TrialConfig(seed=1, phantom_load="none", pattern="mix", jobs=3)
    with pytest.raises(DomainError):
        TrialConfig(seed=1, phantom_load="heavy")
    with pytest.raises(DomainError):
        TrialConfig(seed=1, pattern="zigzag")
    with pytest.raises(DomainError):
        TrialConfig(seed=1, jobs=0)


def test_replay_doc_is_complete():
    cfg = TrialConfig(seed=5, phantom_load="random", jitter=True,
                      pattern="front", jobs=4)
    assert cfg.replay_doc() == {
        "seed": 5, "phantom_load": "random", "jitter": True,
        "pattern": "front", "jobs": 4,
    }


# ----------------------------------------------------------- platform contract


def test_rejects_bus_slot_differing_from_service_time(two_tile_shared):
    spec = edited_spec(
        lambda d: d["architecture"]["tile_types"][0]["memories"][0].update(
            {"service_time_ns": 50}))
    res = from_bindings(spec, SHARED)
    with pytest.raises(DomainError, match="bus slot"):
        simulate(spec, res, TrialConfig(seed=1))


def test_rejects_off_grid_durations():
    spec = edited_spec(
        lambda d: d["application"]["tasks"][0].update({"period_us": 50.005}))
    res = from_bindings(spec, SHARED)
    with pytest.raises(DomainError, match="not a multiple"):
        simulate(spec, res, TrialConfig(seed=1))


def test_rejects_link_arbitration_delay():
    spec = edited_spec(
        lambda d: d["architecture"]["noc"]["link_policy"].update(
            {"arb_delay": 10}))
    res = from_bindings(spec, SHARED)
    with pytest.raises(DomainError, match="link arbitration delay"):
        simulate(spec, res, TrialConfig(seed=1))


def test_rejects_message_period_off_producer_grid():
    spec = edited_spec(
        lambda d: d["application"]["messages"][0].update({"period_us": 75}))
    res = from_bindings(spec, SHARED)
    with pytest.raises(DomainError, match="producer"):
        simulate(spec, res, TrialConfig(seed=1))


def test_rejects_infeasible_mapping(two_tile_spec):
    res = from_bindings(
        two_tile_spec, {"t0": "t0_0.c0", "t1": "t0_0.c0", "t2": "t0_0.c0"})
    assert not res.feasible
    with pytest.raises(ValueError, match="feasible"):
        simulate(two_tile_spec, res, TrialConfig(seed=1))


# --------------------------------------------------------------------- trials


def test_trials_are_deterministic(two_tile_spec, two_tile_shared):
    cfg = TrialConfig(seed=42, pattern="mix", jitter=True)
    a = simulate(two_tile_spec, two_tile_shared, cfg)
    b = simulate(two_tile_spec, two_tile_shared, cfg)
    assert a.responses == b.responses
    assert a.traversals == b.traversals
    assert (a.makespan, a.events) == (b.makespan, b.events)
    assert a.makespan > 0 and a.events > 0


def test_trial_records_every_job_and_packet(two_tile_spec, two_tile_shared):
    res = simulate(two_tile_spec, two_tile_shared, TrialConfig(seed=3, jobs=2))
    # t1 feeds m1, which fires once per 8 task periods: its job count grows
    # so that two full packets are still observed.
    assert len(res.responses["t0"]) == 2
    assert len(res.responses["t2"]) == 2
    assert len(res.responses["t1"]) == 16
    assert list(res.traversals) == [("m1", "t2")]
    assert len(res.traversals[("m1", "t2")]) == 2
    assert all(v > 0 for vals in res.responses.values() for v in vals)


def test_exclusive_path_is_observed_exactly():
    # One task alone on a reserved single-tile mesh: the simulator must
    # reproduce the collapsed bound with zero slack, whatever the adversary
    # does elsewhere.
    spec = generate_spec("networking", mesh=(1, 1), seed=0, tasks=1, messages=0)
    task = spec.application.tasks[0]
    core = spec.architecture.cores[0]
    mapping = from_bindings(spec, {task.id: core.id}, reserved_tiles={"t0_0"})
    st = spec.architecture.tile("t0_0").memory.service_time
    exact = task.wcet[core.core_type] + task.mem_demand * st
    for seed in (1, 2):
        for pattern in ("front", "back", "spread", "mix"):
            res = simulate(spec, mapping, TrialConfig(
                seed=seed, phantom_load="max", jitter=True, pattern=pattern))
            assert res.responses[task.id] == [exact, exact]
    assert mapping.task_wcrt[task.id] >= exact


# ---------------------------------------------------------------------- sweep


def test_sweep_validates_trials(two_tile_spec, two_tile_shared):
    with pytest.raises(DomainError):
        adversarial_sweep(two_tile_spec, two_tile_shared, trials=0)


def test_sweep_bounds_hold_on_bundled_example(two_tile_spec, two_tile_shared):
    sweep = adversarial_sweep(two_tile_spec, two_tile_shared, trials=6, seed=1)
    rows = sweep.rows()
    assert {r["id"] for r in rows} == {"t0", "t1", "t2", "m1->t2"}
    for row in rows:
        assert row["samples"] > 0
        assert row["worst_ns"] > 0
        assert row["margin_ns"] >= 0
        assert row["worst_ns"] <= row["bound_ns"]
    by_id = {r["id"]: r for r in rows}
    assert by_id["t0"]["kind"] == "task"
    assert by_id["m1->t2"]["kind"] == "transfer"
    assert by_id["t0"]["samples"] == 6 * 2


def test_sweep_bounds_hold_on_random_mappings(small_mesh_spec):
    rng = Random(12)
    checked = 0
    while checked < 3:
        res = decode(small_mesh_spec, random_genotype(small_mesh_spec, rng))
        if not res.feasible:
            continue
        checked += 1
        sweep = adversarial_sweep(small_mesh_spec, res, trials=4, seed=checked)
        assert all(row["margin_ns"] >= 0 for row in sweep.rows())


def test_sweep_accepts_fixed_phantom_load(two_tile_spec, two_tile_shared):
    sweep = adversarial_sweep(
        two_tile_spec, two_tile_shared, trials=2, seed=4, phantom_load="none")
    assert all(row["margin_ns"] >= 0 for row in sweep.rows())


def test_violation_carries_replayable_scenario(two_tile_spec, two_tile_shared):
    with pytest.raises(BoundViolation) as exc:
        adversarial_sweep(
            two_tile_spec, two_tile_shared, trials=3, seed=2,
            bound_overrides={"t1": 1},
        )
    replay = exc.value.replay
    assert replay["id"] == "t1"
    assert replay["bound"] == 1
    assert replay["observed"] > 1
    assert replay["trial"] == 0
    assert set(replay) >= {"seed", "phantom_load", "jitter", "pattern", "jobs"}
    # The scenario replays to the reported observation.
    cfg = TrialConfig(
        seed=replay["seed"], phantom_load=replay["phantom_load"],
        jitter=replay["jitter"], pattern=replay["pattern"], jobs=replay["jobs"],
    )
    res = simulate(two_tile_spec, two_tile_shared, cfg)
    assert replay["observed"] in res.responses["t1"]
