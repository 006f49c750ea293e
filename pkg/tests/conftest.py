import warnings

import pytest
from hypothesis import HealthCheck, settings

from orbizeta.errors import DiscretenessWarning
from orbizeta.geodesics import generate_spectrum, octagon_group
from orbizeta.orbifold import OrbifoldSignature, RepresentationData

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# lines collected by tests/test_acceptance.py, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def g2():
    sig = OrbifoldSignature(2, ())
    return sig, RepresentationData.trivial(sig)


@pytest.fixture(scope="session")
def tri237():
    sig = OrbifoldSignature(0, (2, 3, 7))
    return sig, RepresentationData.trivial(sig)


@pytest.fixture(scope="session")
def one_two_m1():
    sig = OrbifoldSignature(1, (2,))
    return sig, RepresentationData.from_angles(sig, 1, [[0, 1]])


@pytest.fixture(scope="session")
def octagon_spectrum_6():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DiscretenessWarning)
        return generate_spectrum(octagon_group(), 6.0, 1)
