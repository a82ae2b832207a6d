"""lodua: an exact engine for local duality in commutative algebra.

Torsion and derived-completion functors, local (co)homology, derived
functors of I-adic completion, lim/lim^1 of towers, completeness and
torsion membership certificates, and comodules over group-like Hopf
algebroids, all with exact arithmetic and explicit certificates.
"""

from .complexes import (ChainComplex, ChainMap, complex_algebra, cone,
                        hom_complex, induced_on_homology, total_complex)
from .criteria import (CompletenessCertificate, ext_telescope,
                       homology_membership, is_L_complete, is_lambda_local)
from .descriptors import (CompletionCokernel, FPObj, LimitModule, Rational,
                          Sum, Telescope, TelescopeQuotient, values_agree)
from .errors import (BudgetExceeded, InternalInconsistency, InvalidInput,
                     LoduaError, PrecisionMismatch, UnrecognizedTower,
                     UnsupportedRing)
from .groebner import GBasis, groebner_ideal, ideal_basis_polys
from .hopf import (Comodule, ComoduleTower, CompleteComodule,
                   GroupLikeHopfAlgebroid, comodule_completion, comodule_limit,
                   extended_adjunction, extended_comodule, iota,
                   make_comodule, make_group_like, verify_theorems)
from .linalg import invariant_factors, smith_normal_form, syzygies
from .local import (CechComplex, GammaObject, GradedObject, IdealData,
                    ValueTable, adic_completion, adjunction_check,
                    derived_completion, derived_hom_value, gamma,
                    gm_ses_check, koszul_complex, local_cohomology,
                    local_cohomology_value, local_homology_Ls,
                    stable_koszul_complex)
from .modules import (FPModule, ModuleMap, ext, free_resolution, hom_module,
                      hom_or_tensor, iso_check, subquotient, tensor, tor)
from .ring import (Ring, RingElement, groebner_basis, make_ring,
                   normal_form)
from .sequences import is_regular_sequence
from .towers import (Tower, TowerLimits, is_pro_trivial, lim_lim1,
                     standard_tower, weak_proregularity_check)

__version__ = "0.1.0"
