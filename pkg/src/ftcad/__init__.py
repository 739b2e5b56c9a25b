"""ftcad: reliability-driven design and runtime simulation of
reconfiguration-based fault-tolerant distributed embedded systems.

Design-time: author a dependency graph, extract the pipelines that keep
each actuator alive, rank them by exponential reliability and export the
strategy as a descending list of one-hot PE bitmasks. Runtime: simulate
the system manager that imports that strategy, tracks PE liveness over a
CAN-style bus and degrades gracefully by re-selecting the best still
satisfiable pipeline.
"""

from .errors import FtcadError
from .kernel import BACKEND as KERNEL_BACKEND
from .model import (
    DependencyGraph,
    Link,
    Node,
    NodeKind,
    ReliabilityAttrs,
    Violation,
    effective_lambda,
    normalize_graph,
    validate_graph,
)
from .io import (
    parse_graph_document,
    parse_options_document,
    serialize_graph_document,
    serialize_options_document,
)
from .pipelines import Pipeline, extract_pipelines, is_operational
from .reliability import (
    DEFAULT_T_REF,
    RankedPipeline,
    ReliabilityCurve,
    component_reliability,
    mttf,
    parallel_reliability,
    pipeline_reliability,
    rank_pipelines,
    sample_curve,
    series_lambda,
    series_reliability,
    system_reliability_exact,
    system_reliability_summary,
    unreliability,
)
from .strategy import ReliabilityOptions, build_options, decode_mask, pipeline_mask
from .bus import CanFrame, abs_identifier, arbitrate, classify_address
from .simulation import (
    Scenario,
    ScenarioEvent,
    SimTrace,
    Simulator,
    age_status,
    agent_step,
    apply_hello,
    manager_select,
    run_simulation,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
