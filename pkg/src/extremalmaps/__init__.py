"""Maps between block algebras whose adjoints preserve extremal functionals."""

from .numkit import (DEFAULT_TOL, STRUCTURE_TOL, NotUnit, RankOneFactor,
                     ShapeMismatch, ZeroMatrix, complete_to_unitary, frobenius,
                     nearest_isometry, operator_norm, rank_one_factor,
                     trace_norm)
from .algebra import (BlockElement, BlockShape, Extreme, Functional,
                      MULTI_BLOCK_SUPPORT, NORM_NOT_ONE, NotExtremal,
                      NotExtreme, NotProjection, PolarFactorization,
                      PureStateVerdict, RANK_EXCEEDS_ONE, compress_functional,
                      extremal_distance, functional_apply,
                      functional_extremity, is_pure_state, is_state,
                      polar_factorize, pure_state_chain)
from .extremal import (AdjointImages, BlockClassification, DimensionObstruction,
                       Form1Certificate, Form2Certificate, InvalidCertificate,
                       InvalidFrame, InvalidIsometry, MultiInputSupport,
                       Rejection, Superoperator, Witness, adjoint_images,
                       build_form1, build_form2, classify_single_block,
                       find_witness, haar_isometry, max_unit_distance,
                       random_form1, random_form2, random_unit, reconstruct,
                       schur_counterexample)
from .structure import (BlockReport, DEGENERATE_BLOCK_PRESENT,
                        GlobalCertificate, GlobalClassification, JordanReport,
                        NOT_EXTREMAL_PRESERVING, NotJordan, PureBlock,
                        PureCertificate, PureClassification,
                        ROTATION_NONTRIVIAL, SampledPurity,
                        check_pure_preserving_sampled, classify_extremal_global,
                        classify_pure_preserving, is_jordan_morphism,
                        split_hom_antihom)
from .disc import (BlaschkeProduct, BoundaryReport, DiscCompositionOp,
                   EvaluationPullback, InvalidZero, NotBoundary, NotUnimodular,
                   OutsideDisc, blaschke_eval, boundary_extremality_check,
                   comp_op_adjoint_on_evaluation, comp_op_apply)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
