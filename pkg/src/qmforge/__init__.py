"""Exact computations in the space of Brooks counting quasimorphisms.

Reduced words over a free group, formal counting sums with exact rational
coefficients, the extension-relation rewriting system, the Nielsen action,
the closed-form speed of T^-1, and the fixpoint-exclusion procedure - plus
a brute-force Cayley-ball oracle kept deliberately independent of the
algebraic code paths.
"""

from .action import NielsenWord, NRep, W1Support, act, n_representative, nrep, w1_support, wstar_n
from .counting import (
    BrooksSum,
    CertifiedLength,
    LengthStatus,
    Mode,
    as_counting,
    brooks_sum,
    certified_reduced_length,
    count_subword,
    count_term,
    counting_sum,
    evaluate,
    format_sum,
    is_unbalanced,
    norm,
    phi,
)
from .fixpoints import EvidenceKind, ExclusionWitness, exclude_fixpoint, verify_witness
from .freegroup import (
    Alphabet,
    BForm,
    Kind,
    NielsenGen,
    Word,
    b_form,
    ball,
    free_reduce,
    inverse,
    multiply,
    parse_word,
    word_str,
)
from .oracle import (
    EquivReport,
    Verdict,
    defect_and_homogenize,
    empirical_equiv,
    exact_identity_check,
    sup_on_ball,
)
from .relations import (
    RelationKind,
    RewriteTrace,
    eliminate_b_powers,
    extension_relation,
    is_normal_form,
    normal_form,
    retarget_power,
)
from .speed import (
    GaugeSeries,
    SpeedReport,
    SupportGeometry,
    empirical_speed,
    in_O,
    rot,
    sp_word,
    speed,
    speed_decompose,
    support_geometry,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "BForm",
    "BrooksSum",
    "CertifiedLength",
    "EquivReport",
    "EvidenceKind",
    "ExclusionWitness",
    "GaugeSeries",
    "Kind",
    "LengthStatus",
    "Mode",
    "NRep",
    "NielsenGen",
    "NielsenWord",
    "RelationKind",
    "RewriteTrace",
    "SpeedReport",
    "SupportGeometry",
    "Verdict",
    "W1Support",
    "Word",
    "act",
    "as_counting",
    "b_form",
    "ball",
    "brooks_sum",
    "certified_reduced_length",
    "count_subword",
    "count_term",
    "counting_sum",
    "defect_and_homogenize",
    "eliminate_b_powers",
    "empirical_equiv",
    "empirical_speed",
    "evaluate",
    "exact_identity_check",
    "exclude_fixpoint",
    "extension_relation",
    "format_sum",
    "free_reduce",
    "in_O",
    "inverse",
    "is_normal_form",
    "is_unbalanced",
    "multiply",
    "n_representative",
    "norm",
    "normal_form",
    "nrep",
    "parse_word",
    "phi",
    "retarget_power",
    "rot",
    "sp_word",
    "speed",
    "speed_decompose",
    "sup_on_ball",
    "support_geometry",
    "verify_witness",
    "w1_support",
    "word_str",
    "wstar_n",
]
