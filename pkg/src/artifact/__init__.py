"""Degrees of regular k-partitions of infinite words, computed from Muller
k-acceptors and named by iterated labeled forests."""

from .acceptors import (Automaton, LassoWord, MullerKAcceptor, acceptor_from_json,
                        acceptor_to_json, eval_lasso, has_balanced_counting_pattern,
                        has_d_counting_pattern, infinity_set, is_aperiodic, product_k,
                        transition_monoid)
from .constructions import (const_acc, dot_acc, nu_acc, oplus_acc, pi_acc, qi_acc, rho_acc,
                            spec_eval_dot, spec_eval_qi)
from .degrees import (Degree, degree, degree_forest, equivalent, in_level, reduces,
                      tree_into_preorder, unfold)
from .errors import ArtifactError, InputError, InternalError, ResourceError, SemanticError
from .iforests import (IForest, ITree, dot_forest, enumerate_forests, equiv_h, hasse, join,
                       leq_h, minimize, mset, parse_forest, parse_tree, qi_forest, to_text)
from .loops import Cycle2Preorder, build_cycle_preorder, loops

__version__ = "0.1.0"
