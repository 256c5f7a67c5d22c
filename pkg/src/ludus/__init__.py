"""Game theory on finite structures: combinatorial, matrix, cooperative and
congestion games, betting and information, knowledge, and the hermitian
representation of interaction."""

__version__ = "0.1.0"

from . import (  # noqa: E402
    betting,
    boltzmann,
    combinatorial,
    coopgame,
    epistemic,
    interaction,
    kernels,
    lp,
    traffic,
    zerosum,
)

__all__ = [
    "__version__",
    "betting",
    "boltzmann",
    "combinatorial",
    "coopgame",
    "epistemic",
    "interaction",
    "kernels",
    "lp",
    "traffic",
    "zerosum",
]
