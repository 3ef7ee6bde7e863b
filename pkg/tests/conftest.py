import pathlib

import numpy as np
import pytest
import yaml

from gaugecheck.catalog import CatalogEntry, pauli_su2, sl2_real


def load_fixture(filename: str) -> str:
    return pathlib.Path(__file__).parent.joinpath("fixtures", filename).read_text()


def complex_matrix(rows) -> np.ndarray:
    """YAML matrices hold plain numbers or ``[re, im]`` pairs."""
    return np.array(
        [[complex(*x) if isinstance(x, list) else complex(x) for x in row] for row in rows]
    )


@pytest.fixture(name="su2_reference")
def su2_reference_yaml_fixture() -> dict:
    return yaml.load(load_fixture("su2-reference.yaml"), Loader=yaml.Loader)


@pytest.fixture(name="braiding_reference")
def braiding_reference_yaml_fixture() -> dict:
    return yaml.load(load_fixture("braiding-q2.yaml"), Loader=yaml.Loader)


@pytest.fixture(name="su2", scope="session")
def su2_entry() -> CatalogEntry:
    return pauli_su2()


@pytest.fixture(name="sl2", scope="session")
def sl2_entry() -> CatalogEntry:
    return sl2_real()


@pytest.fixture(name="rng")
def seeded_rng() -> np.random.Generator:
    return np.random.default_rng(20240229)
