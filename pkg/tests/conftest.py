import warnings

import numpy as np
import pytest

from hogpatch.harness.problems import VortexDomainWarning

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(autouse=True)
def _quiet_vortex_warning():
    # the default [-5, 5] box always trips the tail check; tests that care
    # about the warning re-enable it explicitly
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", VortexDomainWarning)
        yield


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_states(rng, n, gamma=1.4):
    """``n`` random physical conserved states."""
    from hogpatch.euler import GasModel, prim_to_cons

    w = np.empty((n, 5))
    w[:, 0] = rng.uniform(0.1, 10.0, n)
    w[:, 1:4] = rng.uniform(-3.0, 3.0, (n, 3))
    w[:, 4] = rng.uniform(0.05, 10.0, n)
    return prim_to_cons(w, GasModel(gamma))


def vortex_patch(order=2, n=8, reconstructed=True):
    """Single periodic vortex patch with filled ghosts: ``(geom, modal, skinny)``."""
    from hogpatch.boundary import apply_boundary
    from hogpatch.harness.problems import init_isentropic_vortex
    from hogpatch.mesh import ModalState, PatchGeometry, skinny_to_modal
    from hogpatch.reconstruction import reconstruct

    g = PatchGeometry.for_order(order, n, n, n, (-5.0, -5.0, -5.0), (5.0, 5.0, 5.0))
    skinny = init_isentropic_vortex(g, order=order)
    apply_boundary(skinny.values, g, "periodic")
    modal = ModalState.zeros(g, order)
    skinny_to_modal(skinny, modal)
    if reconstructed:
        reconstruct(modal, g)
    return g, modal, skinny
