"""Exact deformation-theory toolkit: DGLAs, Maurer-Cartan and gauge calculus over
Artinian rings, semicosimplicial and bisemicosimplicial totalizations, and Čech
models of the Hilbert functor of hypersurfaces in P^1 and P^2.
"""

from .coefficients import (ArtinianAlgebra, make_dual_numbers, make_staircase_algebra, make_truncated_multivariate,
                           make_truncated_poly, parse_ring)
from .linalg import Subspace, nullspace, rank, solve
from .graded import (CochainComplex, ComplexError, DgSpace, GradedVectorSpace, LinearMap, betti_numbers, cohomology,
                     make_complex, shift)
from .dgla import (Dgla, DglaMorphism, NilpotentElement, bch, check_dgla_axioms, finite_dgla, gauge_action,
                   is_maurer_cartan, lift_order_by_order, mc_residual, nilpotent, tangent_def, tensor_with_algebra,
                   zero_element)
from .simplicial import (SemicosimplicialDgla, SemicosimplicialDgvs, check_semicosimplicial, def_chi_tangent,
                         from_morphism, h1_sc_tangent, mc_chi_membership, tot, tot_tw, z1_sc)
from .bisimplicial import (BisemicosimplicialDgla, BisemicosimplicialDgvs, check_bisemicosimplicial, tot_triangle,
                           tot_tw_triangle, tw_columns_first, tw_orders_coincide, tw_rows_first)
from .geometry import (LineBundleSheaf, LogThetaSheaf, ThetaSheaf, UnstableWindow, UnsupportedInput, cech_lie,
                       chi_bisemicosimplicial, parse_subscheme, standard_cover)
from .hilb import (equation_level_lift, first_order_datum, functor_crosscheck, hilb_tangent, is_gluing_datum,
                   lift_gluing, normal_directions, normal_sheaf_h0, tangent_classes)

__version__ = "0.1.0"
