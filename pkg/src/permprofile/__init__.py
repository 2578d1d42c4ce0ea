"""Pattern profiles of permutations and their exact block decomposition.

The package computes k-pattern profiles, splits them along the orthogonal
subspaces V_0 + ... + V_{k-1} of R^{k!} spanned by matrix elements of the
irreducible representations of S_k, verifies the limiting second-moment
matrix of the normalized profile exactly, and evaluates classical rank
statistics as pattern projections.
"""

__version__ = "0.1.0"

from .errors import PermProfileError
from .perms import (
    PatternId,
    Permutation,
    Profile,
    pattern_of,
    perm_of_points,
    profile,
    profile_sampled,
    sample_uniform,
)
from .qfield import QNum, sqrt_rational

__all__ = [
    "PatternId",
    "PermProfileError",
    "Permutation",
    "Profile",
    "QNum",
    "pattern_of",
    "perm_of_points",
    "profile",
    "profile_sampled",
    "sample_uniform",
    "sqrt_rational",
    "__version__",
]
