"""Locally repairable erasure codes over GF(2^m), with the bound and
reliability machinery that justifies them: Vandermonde Reed-Solomon base
codes, XOR local parities with an implied parity via alignment, the
locality-distance ceiling and its flow-graph verifier, Markov-chain MTTDL
analysis, and a deterministic cluster-repair simulator.
"""

from .gf import GF, Matrix, PivotBasis, SingularMatrixError
from .rs import CodeSpec, RsCode, UnrecoverableError, build_rs, rs_decode, rs_encode
from .lrc import (LrcCode, RepairPlan, RepairStep, Stripe, brute_distance,
                  build_lrc, decode_stripe, encode_stripe, execute_repair,
                  lrc_encode, plan_repair, repair_groups, verify_alignment,
                  verify_locality)
from .bounds import (FlowGraph, build_flow_graph, build_nondecoding_set,
                     distance_bound, flow_edge_count, min_cut_check)
from .construct import (ConstructionAttempt, construct_with_retry, random_lrc,
                        rlnc_success_lower_bound, trial_success_rate)
from .reliability import (ClusterParams, MarkovModel, build_chain,
                          monte_carlo_stripe, mttdl_stripe, mttdl_system,
                          summary_table)
from .sim import (SimConfig, build_cluster, export_trace, fit_slopes,
                  load_trace, parse_config, run_schedule, run_simulation,
                  schedule_events)

__version__ = "0.1.0"
