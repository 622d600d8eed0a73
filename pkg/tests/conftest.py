import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from depth4pit.ideal import set_certificate_checking

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("repo", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture(autouse=True, scope="session")
def _check_certificates():
    # every membership certificate is re-multiplied as it is produced
    set_certificate_checking(True)
    yield
    set_certificate_checking(False)


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


def read_fixture(name: str) -> str:
    with open(fixture_path(name), encoding="utf-8") as fh:
        return fh.read()
