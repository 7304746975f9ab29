"""Density comonads over finite relational structures.

The density comonad of a family of generators sends B to the disjoint
union of one copy of each generator per homomorphism into B.  Its
coalgebras classify the structures built from generators, which ties
component-based graph classes, graph parameters and homomorphism-count
equivalences to one construction.
"""

from .structures import (GRAPH, FinStructure, Homomorphism, Signature, complete_graph, components,
                         coproduct, cycle_graph, disjoint_union, empty_graph, gaifman, graph, load,
                         parse, path_graph, save, serialize, star_graph)
from .homsearch import HomQuery, count_homs, count_monos, enumerate_homs
from .iso import canonical_form, is_isomorphic
from .comonad import Coalgebra, Comonad, ComonadMorphism, LawReport
from .density import (DensityComonad, GeneratorFamily, apply, canonical_coalgebra, check_comonad_laws,
                      coalgebra_by_decomposition, coalgebra_by_search, cofree, cofree_iso, grade_morphism,
                      weak_initial_morphism)
from .gamecomonad import EFComonad, ForestCover, ef_admits_coalgebra, ef_coalgebra_from_forest
from .classes import class_spec, enumerate_graphs, generators, membership, subdivided_clique
from .params import coalgebra_number, graded_family, is_standard_on, tree_depth, tree_width, path_width
from .equivalence import (char_poly, cospectral, double_cover_iso, fractional_iso, hom_vector,
                          lovasz_equiv, relation_report)

__version__ = "0.1.0"
