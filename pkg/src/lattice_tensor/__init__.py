"""Tensor products of finite lattices and semilattices with zero, their
congruence lattices, and executable checks of the congruence isomorphism
Con_c A (x) Con_c B ~ Con_c(A (x) B)."""

from .congruence import (
    ConLattice,
    LatticeCongruence,
    conc_semilattice,
    congruence_lattice,
    is_simple,
    is_subdirectly_irreducible,
    principal_congruence,
    quotient_lattice,
)
from .errors import LatticeError
from .order import (
    FinLattice,
    FinPoset,
    IsoWitness,
    are_isomorphic,
    as_lattice,
    atoms,
    build_poset,
    catalog,
    dual,
    function_lattice,
    is_distributive_lattice,
    join_irreducibles,
    l_of_d,
)
from .semilattice import (
    FinJoinSemilattice,
    JoinCongruence,
    SemilatticeMap,
    direct_sum,
    is_distributive_semilattice,
    is_l_congruence,
    is_l_homomorphism,
    join_reduct,
    kernel,
    quotient_semilattice,
)
from .tensor import (
    BiIdeal,
    Cap,
    TensorAlgebra,
    biideal_generate,
    biideal_join,
    biideal_meet,
    lift_bimorphism,
    minimal_cap,
    mixed_tensor,
    nabla,
    pure_tensor,
    tensor_of_maps,
    tensor_product,
)
from .theorem import (
    CongruencePair,
    Report,
    SubTensorProduct,
    box_congruence,
    epsilon_A,
    epsilon_B,
    epsilon_map,
    full_sub_tensor_product,
    is_sub_tensor_product,
    odot,
    projection_congruence,
    verify_embedding,
    verify_isomorphism,
    verify_quotient_factorization,
)

__version__ = "0.1.0"
