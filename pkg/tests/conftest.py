import pytest

from rigidcircle import scene


@pytest.fixture(scope="session")
def exact1():
    return scene.generation(1)


@pytest.fixture(scope="session")
def exact2():
    return scene.generation(2)


@pytest.fixture(scope="session")
def pres2():
    return scene.generation(2, scene.PRESENTATION)
