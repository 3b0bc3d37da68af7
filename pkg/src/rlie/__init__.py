"""Exact computations with restricted Lie algebras and their modules over
finite fields."""

from .gf import FieldCtx, FieldElem, gf, embedding, frobenius, pth_root
from .linalg import Matrix, Subspace
from .liealg import LieAlgebra, RestrictedLieAlgebra, Subalgebra
from .repmod import LModule, ModuleMap
from .charcluster import Character, CharacterCluster, cluster, fp_span
from .formations import nilpotent_formation, is_hypercentral
from .theorem import Instance, Verdict, check_theorem_instance, proof_pipeline, random_instance

__all__ = [
    "FieldCtx", "FieldElem", "gf", "embedding", "frobenius", "pth_root",
    "Matrix", "Subspace", "LieAlgebra", "RestrictedLieAlgebra", "Subalgebra",
    "LModule", "ModuleMap", "Character", "CharacterCluster", "cluster", "fp_span",
    "nilpotent_formation", "is_hypercentral",
    "Instance", "Verdict", "check_theorem_instance", "proof_pipeline", "random_instance",
]
