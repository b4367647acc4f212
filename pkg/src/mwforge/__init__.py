"""Compactly supported orthogonal wavelet and multiwavelet filter banks
built from unitary ABCD system realizations."""

from .masks import (RT2, MaskPair, MatrixMask, PolyphaseMatrix, SumRuleVectors,
                    polyphase_assemble, polyphase_split,
                    spectral_condition_holds, sum_rule_residual, symbol_eval,
                    vanishing_moment_residual)
from .qmf import (EllMap, GramCoefficients, build_ell, disk_samples,
                  displacement_residual, ell_eval, gram_coefficients,
                  qmf_residual, uep_residual)
from .realization import (Realization, build_abcd, nilpotency_residual,
                          state_equation_residual, taylor_masks,
                          transfer_eval, unitarity_residual)
from .synthesis import (BlaschkeFactor, D6Family, FullRankUnitary, Projection,
                        RankOneUnitarySpec, blaschke_product, build_family,
                        chui_lian, d6_family, degree1_synthesize,
                        designated_vectors, embedded_projection,
                        full_rank_projection_a3, full_rank_projection_a4,
                        lebrun_vetterli, lebrun_vetterli_unitary,
                        rank1_sum_rule_residual, rank1_unitary,
                        scalar_projection, solve_blaschke_d6, solve_d6,
                        solve_scalar_order2, verify_lemma_equivalence)
from .filterbank import (CascadeResult, Signal, SubbandPair, analyze, cascade,
                         l2_norm_residual, synthesize)

__version__ = "0.1.0"
