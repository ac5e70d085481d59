"""Exact dimension estimates for spans of product sets.

Backends model a ring K over a central base field k (finite fields, simple
extensions, rational function fields, rational quaternions and group
algebras).  On top of exact linear algebra the package computes spans of
Minkowski products, stabilizers, division closures, connectivity atoms, and
checks Kneser, Pluennecke, Ruzsa and small-doubling estimates with witnesses.
"""
from .connectivity import (
    AtomReport,
    ConnectivityContext,
    connectivity_cost,
    kappa_and_atoms,
    submodularity_check,
    tao_classify,
)
from .correspondence import (
    correspondence_report,
    embed_torsion_free,
    group_kneser_check,
    group_plunnecke_check,
    group_ruzsa_check,
    to_group_algebra,
)
from .errors import BudgetExceeded, SpanboundError, UsageError, WitnessCheckFailed
from .groups import (
    AbelianGroup,
    CayleyGroup,
    GroupSet,
    cyclic_group,
    dihedral_group,
    group_from_spec,
    product_set,
    set_stabilizer,
    symmetric_group,
)
from .scalars import (
    Backend,
    BackendDescriptor,
    Element,
    backend_create,
    elem_add,
    elem_format,
    elem_inverse,
    elem_is_unit,
    elem_mul,
    elem_parse,
    sample_element,
)
from .spans import (
    SetInstance,
    Subspace,
    inverse_set,
    iter_subspaces,
    product_of_subspaces,
    product_span,
    span_of,
    translate,
)
from .structure import StabilizerReport, coset_decompose, division_closure, stabilizer
from .theorems import (
    CheckReport,
    KneserVerdict,
    cube_bound_check,
    diderrich_check,
    dyson_transform,
    kneser_check,
    kneser_nfold,
    petridis_check,
    plunnecke_powers,
    rho_minimize,
    ruzsa_triple_check,
    small_doubling_cover,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
