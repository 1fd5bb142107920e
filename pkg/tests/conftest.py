import math

import numpy as np
import pytest

from effectalg import PhaseFamily

# the four phase profiles exercised across every suite
FAMS = [
    PhaseFamily.from_phase(0.0, 0.0),
    PhaseFamily.from_phase(0.7, math.pi / 5),
    PhaseFamily.from_phase(-1.3, 0.0),
    PhaseFamily.from_phase(2.5, 1.0),
]
FAM_IDS = ["sqrt", "c0.7_xi36deg", "c-1.3", "c2.5_xi1rad"]


@pytest.fixture(params=FAMS, ids=FAM_IDS)
def fam(request) -> PhaseFamily:
    return request.param


def proj_p() -> np.ndarray:
    """Rank-1 projector onto the first basis vector."""
    return np.diag([1.0, 0.0]).astype(complex)


def proj_q() -> np.ndarray:
    """Rank-1 projector onto (|0> + |1>)/sqrt(2); does not commute with proj_p."""
    return 0.5 * np.ones((2, 2), dtype=complex)
