"""Multivariate Krawtchouk polynomials as matrix elements of rotation-group
representations on oscillator states, with an operator oracle to check them.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DomainError,
    InconsistencyError,
    InputError,
    KrawpolyError,
    NonGenericRotationError,
    NonPrincipalRotationError,
    NotARotationError,
    SingularParametrizationError,
)
from .family import KrawtchoukFamily, genericity_report  # noqa: E402
from .fock_basis import LevelBasis, LevelIndex, dimension, enumerate_basis  # noqa: E402
from .oracle import RepresentationMatrix, representation_matrix  # noqa: E402
from .rotations import Generator, euler_product, plane_rotation, random_rotation  # noqa: E402

__all__ = [
    "DomainError",
    "Generator",
    "InconsistencyError",
    "InputError",
    "KrawpolyError",
    "KrawtchoukFamily",
    "LevelBasis",
    "LevelIndex",
    "NonGenericRotationError",
    "NonPrincipalRotationError",
    "NotARotationError",
    "RepresentationMatrix",
    "SingularParametrizationError",
    "__version__",
    "dimension",
    "enumerate_basis",
    "euler_product",
    "genericity_report",
    "plane_rotation",
    "random_rotation",
    "representation_matrix",
]
