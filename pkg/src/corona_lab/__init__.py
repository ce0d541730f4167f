"""Constructive corona and ideal-membership solutions in the subalgebra C + I of H-infinity."""

from .bezout import (BezoutCertificate, bezout_tuple, corona_bezout,
                     extended_euclid, ideal_solve, minimal_pointwise_solution)
from .functions import (FnTuple, Poly, RationalFn, SubalgebraTuple, ZeroIdeal,
                        decompose, evaluate, ideal_from_zeros, tuple_eval)
from .kernel import (KernelMatrix, build_q, build_q_truncated, q_identity_pair,
                     q_identity_self, q_kernel_check, q_norm)
from .norms import (DiskGrid, NormInterval, check_treil_hypothesis,
                    check_wolff_hypothesis, inf_gramian, psi_integral_check,
                    sup_norm, treil_psi, uchiyama_bound)
from .transfer import (TransferResult, lemma22_check, transfer_corona,
                       transfer_ideal, wolff_pipeline)

__version__ = "0.1.0"
