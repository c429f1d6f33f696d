import pytest

from gopprr.fixtures import load_pack


@pytest.fixture(scope="session")
def sysml_pack():
    return load_pack("mini_sysml")


@pytest.fixture(scope="session")
def bpmn_pack():
    return load_pack("mini_bpmn")
