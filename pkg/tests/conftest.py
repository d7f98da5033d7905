import pytest

import braggstack as bs


@pytest.fixture(scope="session")
def geom():
    """Reference geometry: 810/780 nm, Bragg-matched, k_B T = 0.4 hbar U0."""
    return bs.bragg_matched_geometry()


@pytest.fixture(scope="session")
def cfg():
    """Default three-line response."""
    return bs.default_config()


@pytest.fixture(scope="session")
def cfg1():
    """Single unit-strength line at zero offset."""
    return bs.single_line_config()
