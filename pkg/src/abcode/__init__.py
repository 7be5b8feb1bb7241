"""Information sets and permutation decoding for abelian codes.

The pipeline: describe a code by its defining set (orbit module), build
check positions combinatorially (gamma module), verify them against the
parity matrix (code module), optionally transport cyclic codes through a
coprime factorization (crt module), and decode with the translation and
Frobenius permutations (permdec module).
"""

from .code import (AbelianCode, CheckTensor, DistanceResult, MatrixGF,
                   VerifyResult, check_tensor, contains, dimension,
                   distance_at_least, encode, evaluate_at_root,
                   find_low_weight_codeword, generator_matrix, min_distance,
                   parity_matrix, standard_form_parity, verify_check_positions)
from .crt import CrtMap
from .gamma import (CheckSet, FGNode, FGTree, GammaTables, build_gamma,
                    compute_fg, compute_tables, information_set)
from .gf import (FieldContext, FieldElem, FieldError, ScalarField,
                 build_context, frobenius, generator, in_subfield,
                 root_of_unity, subfield_coords)
from .orbit import (Ambient, DefiningSet, NotOrbitClosed, RestrictedReps,
                    check_restriction, coset, coset_size, from_orbit_reps,
                    normalize_ordering, orbits, permute, project, qorbit,
                    restricted_reps, unpermute, validate_defining_set)
from .permdec import (LambdaElem, PDResult, PDSet, SearchConstraints,
                      SearchHit, apply_to_vector, design_report,
                      design_search, enumerate_lambda, frobenius_order,
                      identity_elem, is_pd_set, lambda_pd_set, lemma13_check,
                      lemma15_check, permutation_decode, translation_subgroup)

__version__ = "0.1.0"
