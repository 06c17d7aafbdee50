"""Topology design for time-slotted satellite networks.

Schedules inter-satellite and ground-satellite links per time slot to
minimize data-delivery delay to ground stations while meeting a ranging
requirement. Three schedulers share one domain model: an exact
routing-aware integer program, a routing-agnostic reformulation built on
probe-matrix delay counting, and a fast maximum-weight matching heuristic,
plus a fairness-driven baseline, a store-carry-forward simulator, and LP
export for external solvers.
"""

__version__ = "0.1.0"

from .bnb import enumerate_maximal_matchings, solve_branch_and_bound
from .fcp import FairnessCounters, schedule_state_fcp
from .hmwm import (EdgeClass, HmwmTrace, WeightedSlotGraph, build_slot_graph,
                   classify_edge, comm_weight, ranging_weight,
                   schedule_state_hmwm, solve_slot_matching,
                   update_node_weights)
from .ilp_exact import build_ilp
from .ilp_model import (Constraint, IlpModel, IlpSolution, Variable,
                        evaluate_objective, verify_assignment)
from .lp_io import export_lp, format_lp, read_solution
from .matching import max_weight_matching
from .probes import (AccessKind, AccessPattern, ProbeMatrix, access_patterns,
                     count_probe_zeros, probe_matrix, total_probe_entries,
                     zero_run_delay, zero_runs)
from .railp import build_railp, extract_topology
from .scenario import (Node, NodeKind, RangingAudit, Scenario, ScenarioError,
                       ScenarioState, SystemParams, TopologySchedule,
                       TrafficProfile, Violation, classify_nodes,
                       load_scenario, ranging_audit, save_scenario,
                       validate_topology)
from .sim import EvaluationReport, PacketRecord, compare, simulate
from .synth import synthetic_scenario, test_scenario, walkthrough_scenario

__all__ = [
    "__version__",
    # scenario model
    "Node", "NodeKind", "Scenario", "ScenarioError", "ScenarioState",
    "SystemParams", "TopologySchedule", "TrafficProfile", "Violation",
    "RangingAudit", "classify_nodes", "validate_topology", "ranging_audit",
    "load_scenario", "save_scenario",
    # probe-based delay counting
    "ProbeMatrix", "AccessKind", "AccessPattern", "probe_matrix",
    "zero_run_delay", "zero_runs", "count_probe_zeros",
    "total_probe_entries", "access_patterns",
    # optimization models and solver
    "IlpModel", "IlpSolution", "Variable", "Constraint", "build_ilp",
    "build_railp", "extract_topology", "solve_branch_and_bound",
    "enumerate_maximal_matchings", "verify_assignment", "evaluate_objective",
    "export_lp", "format_lp", "read_solution",
    # heuristics and baseline
    "max_weight_matching", "EdgeClass", "WeightedSlotGraph", "HmwmTrace",
    "classify_edge", "comm_weight", "ranging_weight", "update_node_weights",
    "build_slot_graph", "solve_slot_matching", "schedule_state_hmwm",
    "FairnessCounters", "schedule_state_fcp",
    # evaluation
    "PacketRecord", "EvaluationReport", "simulate", "compare",
    # scenario builders
    "test_scenario", "walkthrough_scenario", "synthetic_scenario",
]
