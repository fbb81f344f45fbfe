"""Nilpotent invariants of string links presented by pure braid words.

Two independent pipelines compute Milnor mu-bar data: a Magnus-expansion
route through free-group longitudes, and a HOMFLYPT skein route through
cabled and band-fused closures.  On top of the Magnus route sit the Orr
kernel coordinates, the Morita-Milnor homology 3-class, and the
tree-reduced Kontsevich datum.
"""

from .words import (
    BraidWord,
    ConventionError,
    PurityError,
    Word,
    artin_apply,
    band_generator,
    commutator,
    free_reduce,
    is_pure,
    longitudes,
    realize_last_longitude,
)
from .magnus import (
    NotPrimitiveError,
    TruncatedTensor,
    lcs_degree,
    log_magnus,
    magnus_expand,
    mu_invariant,
)
from .lyndon import (
    LieElement,
    WittTable,
    lie_bracket,
    lie_coordinates,
    lyndon_words,
    witt_ranks,
)

__all__ = [
    "BraidWord",
    "ConventionError",
    "LieElement",
    "NotPrimitiveError",
    "PurityError",
    "TruncatedTensor",
    "Word",
    "WittTable",
    "artin_apply",
    "band_generator",
    "commutator",
    "free_reduce",
    "is_pure",
    "lcs_degree",
    "lie_bracket",
    "lie_coordinates",
    "log_magnus",
    "longitudes",
    "lyndon_words",
    "magnus_expand",
    "mu_invariant",
    "realize_last_longitude",
    "witt_ranks",
]
