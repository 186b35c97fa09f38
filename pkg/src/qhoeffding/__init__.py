"""Error exponents for binary quantum hypothesis testing.

The package computes ``phi(s) = log Tr[rho^(1-s) sigma^s]``, its Legendre
transforms and the Hoeffding exponent, the classical pair reproducing
``phi``, exact finite-n classical tails, finite-n Helstrom tests and
data-processing checks under random channels.
"""

from ._version import __version__
from .channels import (
    KrausChannel,
    depolarizing_qubit,
    identity_channel,
    random_channel,
    relent_monotonicity_check,
    renyi_monotonicity_check,
)
from .classical_iid import (
    cramer_rate_lower,
    cramer_rate_upper,
    iid_lower_bound,
    iid_tail_f,
    iid_tail_g,
    tails_sweep,
)
from .ensembles import bernoulli_pair, random_pair, reference_pair
from .errors import ConsistencyError, DomainError, QHoeffdingError, ResourceError, ValidationError
from .functionals import (
    StatePair,
    a_domain,
    b_tilde,
    capital_phi,
    capital_psi,
    conversion_check,
    exponent_profile,
    hoeffding_bound,
    hoeffding_details,
    invert_psi,
    phi,
    phi_tilde,
    relative_entropy,
    xi,
)
from .helstrom import conjecture_probe, error_probabilities, helstrom_test, lemma_check, spectral_tails
from .linalg import matrix_exp, matrix_log, matrix_power, spectral_decompose, tensor_power
from .nussbaum_szkola import ClassicalPair, classical_phi, min_overlap, ns_distributions

__all__ = [
    "__version__",
    "ClassicalPair",
    "ConsistencyError",
    "DomainError",
    "KrausChannel",
    "QHoeffdingError",
    "ResourceError",
    "StatePair",
    "ValidationError",
    "a_domain",
    "b_tilde",
    "bernoulli_pair",
    "capital_phi",
    "capital_psi",
    "classical_phi",
    "conjecture_probe",
    "conversion_check",
    "cramer_rate_lower",
    "cramer_rate_upper",
    "depolarizing_qubit",
    "error_probabilities",
    "exponent_profile",
    "helstrom_test",
    "hoeffding_bound",
    "hoeffding_details",
    "identity_channel",
    "iid_lower_bound",
    "iid_tail_f",
    "iid_tail_g",
    "invert_psi",
    "lemma_check",
    "matrix_exp",
    "matrix_log",
    "matrix_power",
    "min_overlap",
    "ns_distributions",
    "phi",
    "phi_tilde",
    "random_channel",
    "random_pair",
    "reference_pair",
    "relative_entropy",
    "relent_monotonicity_check",
    "renyi_monotonicity_check",
    "spectral_decompose",
    "spectral_tails",
    "tails_sweep",
    "tensor_power",
    "xi",
]
