"""Exact-arithmetic lattice toolkit: discriminant forms, root systems, and
primitive-embedding decisions for the rank-22 supersingular-type lattices."""

from .fqf import (
    FiniteQuadraticForm,
    JordanComponent,
    brute_force_tau,
    direct_sum,
    isomorphic,
    negate,
    nikulin_exists,
    overlattice_forms,
    render_symbol,
    signature_mod8,
    symbol_of,
)
from .hmdata import HMRecord, PrimeCondition, load_table, parse_condition, parse_symbol
from .intlat import (
    DiscriminantGroup,
    IntegralLattice,
    Sublattice,
    discriminant_group,
    leech_lattice,
    membership,
    orthogonal_complement,
    rank_ell_bound,
    roots,
    saturate,
)
from .k3class import (
    EmbedDecision,
    SupersingularForm,
    WildBoundReport,
    allowed_components,
    anisotropy_check,
    n_form,
    primitively_embeds,
    reproduce_table,
    tame_rank_bound_check,
    wild_degree_bound,
)
from .prootpair import (
    ClassifyResult,
    ProotVerdict,
    classify,
    disc_action_nontrivial,
    fixed_sublattice,
    p_group_check,
    sharp,
    verdict,
)
from .rootsys import (
    Isometry,
    IsometryGroup,
    RootDatum,
    build,
    named_elements,
    reflection,
    t_sublattice,
    weights,
    weyl_group,
)

__version__ = "0.1.0"
