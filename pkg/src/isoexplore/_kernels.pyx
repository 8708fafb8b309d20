# cython: language_level=3, boundscheck=False, cdivision=True
"""Compiled timing kernels.

Line-for-line twin of `_kernels_py`; keep the two in sync (tests assert
equivalence on randomized inputs). All arguments and results are integer
nanoseconds or counts; ceilings are exact integer arithmetic.
"""

IMPL = "cython"

ctypedef long long i64


cdef inline i64 _ceil_div(i64 a, i64 b) nogil:
    # cdivision truncates toward zero, so -(-a // b) is wrong here;
    # this form is exact for a >= 0, b > 0 (the only inputs we ever see).
    return (a + b - 1) // b


def ceil_div(i64 a, i64 b) -> int:
    return _ceil_div(a, b)


def task_bus_slots(i64 wcet, i64 md, i64 st, i64 bus_slot) -> int:
    """Bus slots a task needs: one per access, capped by the slots that can
    pass during its undisturbed execution span."""
    if md == 0:
        return 0
    cdef i64 span = _ceil_div(wcet + md * st, bus_slot)
    return md if md < span else span


def bus_stall(i64 slots, i64 bus_slot, i64 weight, i64 period) -> int:
    """Worst-case bus interference: one full service gap per needed slot."""
    return slots * (period - weight * bus_slot)


def core_stall(i64 demand, i64 core_slot, i64 weight, i64 period) -> int:
    """Worst-case preemption: one service gap per core period the demand
    (execution + memory service + bus stalls) spreads over."""
    cdef i64 budget = weight * core_slot
    return _ceil_div(demand, budget) * (period - budget)


def task_response(
    i64 wcet, i64 md, i64 st, i64 bus_slot, i64 bus_weight, i64 bus_period,
    i64 core_slot, i64 core_weight, i64 core_period,
) -> int:
    """Worst-case response time of a task with all accesses on one bus."""
    cdef i64 service = md * st
    cdef i64 slots = 0
    cdef i64 span
    if md > 0:
        span = _ceil_div(wcet + service, bus_slot)
        slots = md if md < span else span
    cdef i64 stall = slots * (bus_period - bus_weight * bus_slot)
    cdef i64 demand = wcet + service + stall
    cdef i64 budget = core_weight * core_slot
    return demand + _ceil_div(demand, budget) * (core_period - budget)


def min_task_weight(
    i64 deadline, i64 demand, i64 core_slot, i64 core_period, i64 capacity
) -> int:
    """Least core weight whose response time meets the deadline, 0 if none.

    `demand` is the weight-independent numerator (execution + memory service
    + bus stalls); only the preemption term varies with the weight.
    """
    cdef i64 w, budget, resp
    for w in range(1, capacity + 1):
        budget = w * core_slot
        resp = demand + _ceil_div(demand, budget) * (core_period - budget)
        if resp <= deadline:
            return w
    return 0


def msg_bus_slots(i64 md, i64 bus_slot, i64 st) -> int:
    """Bus slots a network adapter needs to move a message's words."""
    return _ceil_div(md, _ceil_div(bus_slot, st))


def adapter_latency(
    i64 md, i64 st, i64 slots, i64 bus_slot, i64 bus_weight, i64 bus_period,
    i64 unit_slot, i64 unit_weight, i64 unit_period,
) -> int:
    """One side of a transfer: adapter moves `md` words over `slots` bus
    slots, itself scheduled on the adapter's own arbitration unit."""
    cdef i64 bus_rounds = _ceil_div(slots, bus_weight)
    return (
        md * st
        + bus_rounds * (bus_period - bus_weight * bus_slot)
        + _ceil_div(bus_rounds, unit_weight) * (unit_period - unit_weight * unit_slot)
    )


cdef inline i64 _route_latency(
    i64 flits, i64 hops, i64 router_delay, i64 cycle, i64 weight, i64 period
) nogil:
    cdef i64 pipeline = (flits - 1 + hops * router_delay) * cycle
    cdef i64 stall_rounds = _ceil_div(flits, weight) - 1 + hops
    return pipeline + stall_rounds * (period - weight * cycle)


def route_latency(
    i64 flits, i64 hops, i64 router_delay, i64 cycle, i64 weight, i64 period
) -> int:
    """Wormhole traversal of a routed message: pipeline fill plus one
    service gap per link period in which flits can stall."""
    return _route_latency(flits, hops, router_delay, cycle, weight, period)


cdef inline i64 _msg_traversal(
    i64 tx_fixed, i64 tx_rounds, i64 tx_slot, i64 tx_period,
    i64 rx_fixed, i64 rx_rounds, i64 rx_slot, i64 rx_period,
    i64 flits, i64 hops, i64 router_delay, i64 cycle,
    i64 weight, i64 link_period,
) nogil:
    cdef i64 d_tx = tx_fixed + _ceil_div(tx_rounds, weight) * (tx_period - weight * tx_slot)
    cdef i64 d_rx = rx_fixed + _ceil_div(rx_rounds, weight) * (rx_period - weight * rx_slot)
    cdef i64 d_noc = _route_latency(flits, hops, router_delay, cycle, weight, link_period)
    return d_tx + d_noc + d_rx


def msg_traversal(
    i64 tx_fixed, i64 tx_rounds, i64 tx_slot, i64 tx_period,
    i64 rx_fixed, i64 rx_rounds, i64 rx_slot, i64 rx_period,
    i64 flits, i64 hops, i64 router_delay, i64 cycle,
    i64 weight, i64 link_period,
) -> int:
    """Worst-case traversal at one shared weight for the TX, route and RX.

    `*_fixed` is the weight-independent part of the adapter latency
    (word service + bus stalls); `*_rounds` the bus rounds to schedule.
    """
    return _msg_traversal(
        tx_fixed, tx_rounds, tx_slot, tx_period,
        rx_fixed, rx_rounds, rx_slot, rx_period,
        flits, hops, router_delay, cycle, weight, link_period,
    )


def min_msg_weight(
    i64 deadline,
    i64 tx_fixed, i64 tx_rounds, i64 tx_slot, i64 tx_period,
    i64 rx_fixed, i64 rx_rounds, i64 rx_slot, i64 rx_period,
    i64 flits, i64 hops, i64 router_delay, i64 cycle,
    i64 link_period, i64 capacity,
) -> int:
    """Least shared TX/route/RX weight meeting the deadline, 0 if none."""
    cdef i64 w, total
    for w in range(1, capacity + 1):
        total = _msg_traversal(
            tx_fixed, tx_rounds, tx_slot, tx_period,
            rx_fixed, rx_rounds, rx_slot, rx_period,
            flits, hops, router_delay, cycle, w, link_period,
        )
        if total <= deadline:
            return w
    return 0
