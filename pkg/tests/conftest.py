import pytest

from denjoy_twist.build import build_system


@pytest.fixture(scope="session")
def default_build():
    return build_system()


@pytest.fixture(scope="session")
def build_path(default_build, tmp_path_factory):
    path = tmp_path_factory.mktemp("build") / "build.json"
    default_build.save(path)
    return path
