from pathlib import Path

import pytest

from polyreal.complex import SurfaceComplex, parse_triangulation

DATA = Path(__file__).parent / "data"

TETRA = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
RP2_6 = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
         (1, 2, 4), (1, 3, 4), (1, 3, 5), (2, 3, 5), (2, 4, 5)]
TORUS_7 = [t for i in range(7)
           for t in ((i, (i + 1) % 7, (i + 3) % 7), (i, (i + 2) % 7, (i + 3) % 7))]


def load(name):
    lines = (DATA / name).read_text().splitlines()
    return [parse_triangulation(x) for x in lines if x.strip() and not x.startswith("#")]


@pytest.fixture(scope="session")
def tetra():
    return SurfaceComplex(TETRA)


@pytest.fixture(scope="session")
def rp2_6():
    return SurfaceComplex(RP2_6)


@pytest.fixture(scope="session")
def torus_7():
    return SurfaceComplex(TORUS_7)


@pytest.fixture(scope="session")
def small_corpus():
    return load("small.txt")


@pytest.fixture(scope="session")
def rp2_9():
    return load("rp2_9.txt")


@pytest.fixture(scope="session")
def klein_9():
    return load("klein_9.txt")


@pytest.fixture(scope="session")
def genus2():
    return load("genus2_11.txt")
