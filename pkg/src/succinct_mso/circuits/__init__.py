"""Boolean circuits, succinct graphs and the reduction compilers."""

from .cnf import CnfError, CnfInstance, all_cnfs, dump_dimacs, parse_dimacs
from .ir import BoolCircuit, Builder, CircuitError, dump_netlist, eval_batch, eval_circuit, parse_netlist
from .reductions import (
    ConsistencyViolation, CvpInstance, EdgeCaseTable, cvp_reduction, edge_case_table,
    min_order_reduction, pump_circuit, quad_table, random_cvp, sat_expected, sat_reduction, sat_word,
    triple_table,
)
from .succinct import (
    DecodeGuardError, SuccinctGraph, decode, dump_succinct, encode_explicit, parse_succinct,
)
from .xi import XiFixture, build_xi_fixture, load_xi_fixture, xi_decider

__all__ = [name for name in dir() if not name.startswith("_")]
