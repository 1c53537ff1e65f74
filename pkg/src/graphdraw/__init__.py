"""graphdraw: finite prefixes of infinite random graphs.

Probability sequences and their series classes, product measures on 0-1
sequences, finite graph algebra, constructive edge-probability schedules
with full audits, seeded reproducible sampling, and the deterministic
constructions the samples are checked against.
"""

__version__ = "0.1.0"

from .probseq import (Constant, GeometricToZero, Interleave, InverseLog,
                      OneMinus, Opaque, ProbSeq, SeqClass, Table, classify,
                      parse, partial_sums, plan_blocks, split_summable)
from .graphcore import (FiniteGraph, GraphOracle, components, complement,
                        degree_census, find_induced, graph_catalog, induced,
                        is_isomorphic, isolated_union, modify, named_graph,
                        switch, weak_universality_scan)
from .schedules import (EdgeSchedule, closure_schedule, index_pair,
                        pair_index, replicate_schedule, star_schedule,
                        sum_with_fixed_schedule, suspended_schedule,
                        theta_schedule, ufin_schedule, uniform_schedule)
from .sampler import (SampleReport, UniformOracle, deviation_report,
                      sample_matrix, sample_prefix, trial_harness)
from .constructions import (CanonicalUfinOracle, basis_extract,
                            caterpillar_tree, closure, ds_recovery,
                            indivisibility_check, ramsey_graph, star_of_stars,
                            theta_decompose, ufin_prefix, un_prefix,
                            v_tree, v_tree_prime, verify_ramsey)
