"""Weighted Max-SAT by resolution: capped cost arithmetic, simplification
rules, Max-RES, branch and bound (Max-DPLL) and variable elimination (Max-DP)."""
from .core import (Clause, Formula, absorb, add_clause, assign, clause_order, cost_of,
                   falsified, harden, make_clause, ominus, oplus, pure_literal)
from .elimination import (EliminationOrder, EliminationStats, InteractionGraph,
                          ResourceLimitError, induced_width, interaction_graph,
                          max_dp, max_var_elim, min_fill_order, select_elim_var)
from .formats import (ParseError, export_opb, parse_auction, parse_cnf, parse_graph,
                      parse_wcnf, write_auction, write_graph, write_wcnf)
from .hyper import (ImplicationGraph, build_implication_graph, chain_resolution,
                    cycle_resolution, detect_chain, dominating_unit_clause, star_rule,
                    valid_chain)
from .instances import (AuctionInstance, Graph, encode_auction, encode_max_cut,
                        encode_max_one, encode_vertex_cover, gen_path_formula,
                        gen_random_auction, gen_random_graph, gen_random_ksat,
                        gen_random_wcnf)
from .oracle import brute_force_opt, cost_table, per_assignment_table
from .resolution import clashing_variable, cnf_linear, cnf_recover, max_res, neighborhood_res
from .search import SolveResult, SolverConfig, max_dpll, select_literal, simplify

__version__ = "0.1.0"
