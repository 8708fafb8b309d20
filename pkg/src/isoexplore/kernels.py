"""Backend selector for the timing kernels.

Prefers the compiled extension; falls back to the pure-Python twin when the
extension is absent or ISOEXPLORE_PURE_PYTHON=1 is set. Both expose the same
functions and are interchangeable (tests assert agreement).
"""

from __future__ import annotations

import os

if os.environ.get("ISOEXPLORE_PURE_PYTHON") == "1":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

ceil_div = _impl.ceil_div
task_bus_slots = _impl.task_bus_slots
bus_stall = _impl.bus_stall
core_stall = _impl.core_stall
task_response = _impl.task_response
min_task_weight = _impl.min_task_weight
msg_bus_slots = _impl.msg_bus_slots
adapter_latency = _impl.adapter_latency
route_latency = _impl.route_latency
msg_traversal = _impl.msg_traversal
min_msg_weight = _impl.min_msg_weight


def backend_name() -> str:
    """Which twin is active: "cython" or "python"."""
    return _impl.IMPL
