import numpy as np
import pytest

from convexwave.airy import phase_table
from convexwave.parametrix import ReflectionSum
from convexwave.propagator import SpectralPropagator
from convexwave.wavepacket import CutoffSpec, PacketParams


@pytest.fixture(scope="session")
def table():
    return phase_table(200)


@pytest.fixture()
def rng():
    return np.random.default_rng(0)


@pytest.fixture(scope="session")
def cutoffs():
    return CutoffSpec.default()


@pytest.fixture(scope="session")
def packet50():
    return PacketParams.from_lambda(50.0)


@pytest.fixture(scope="session")
def spectral50(packet50, cutoffs):
    return SpectralPropagator(packet50, cutoffs)


@pytest.fixture(scope="session")
def reflection50(packet50, cutoffs):
    return ReflectionSum(packet50, cutoffs)
