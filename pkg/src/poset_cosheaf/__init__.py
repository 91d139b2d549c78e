"""Cosheaves on finite posets: down-set topologies, covers, exact colimits and Kan extensions."""

from .covers import (Cover, cover_inclusion, enumerate_basic_covers, enumerate_covers,
                     is_basic_cover, is_cech_cover, is_complete_cover, is_cover, refines)
from .cosheaf import (AuxiliaryJ, CosheafCheck, Precosheaf, build_auxiliary_J,
                      check_proof_steps, cosheaf_arrow, falsify_refinement,
                      figure1_fixture, verify_theorem)
from .errors import (CosheafError, CycleError, MissingOpen, NotACocone, NotBasic,
                     NotComparable, NotFunctorial, ParentMismatch, ParseError,
                     SizeError, TargetMismatch, ValidationError)
from .kan import KanExtension, hat, lan
from .poset import (CommaPoset, DownSet, FinitePoset, PosetMap, comma_over,
                    comma_under, connected_components, down_set_lattice,
                    from_relations, iota, is_cofinal, opposite,
                    principal_down_set)
from .valcat import (ColimitResult, Diagram, FinSetMap, Matrix, check_functorial,
                     colimit, factor_through, indicator_diagram, induced_map, is_isomorphism,
                     restrict, transport_map)

__version__ = "0.1.0"
