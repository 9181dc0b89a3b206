"""Secure on-off transmission with artificial noise over MISO fading channels.

Closed-form designs for non-adaptive and adaptive encoding, their throughput
and high-power approximations, and a seeded Monte Carlo simulator that checks
them against the physical channel model.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    DegenerateChannelError,
    DomainError,
    ParameterError,
    QuadratureError,
    SearchFailure,
)
from .secrecy import (  # noqa: E402
    SecrecyBudget,
    SystemConfig,
    WiretapRates,
    db_to_linear,
    eve_snr_ccdf,
    lambda_quantity,
    linear_to_db,
    secrecy_outage_probability,
    transmit_probability,
)

__all__ = [
    "__version__",
    "ConvergenceError",
    "DegenerateChannelError",
    "DomainError",
    "ParameterError",
    "QuadratureError",
    "SearchFailure",
    "SecrecyBudget",
    "SystemConfig",
    "WiretapRates",
    "db_to_linear",
    "eve_snr_ccdf",
    "lambda_quantity",
    "linear_to_db",
    "secrecy_outage_probability",
    "transmit_probability",
]
