from fractions import Fraction

import pytest

from oamix import (
    build_spec,
    cross_amounts,
    oofa_expand,
    project_columns,
    scale_amounts,
    simplex_centroid,
    simplex_lattice,
)


@pytest.fixture(scope="session")
def table1():
    return oofa_expand(simplex_lattice(3, 3))


@pytest.fixture(scope="session")
def table2():
    return oofa_expand(project_columns(simplex_centroid(4), {4}))


@pytest.fixture(scope="session")
def table3(table1):
    return cross_amounts(table1, [Fraction(3, 4), Fraction(3, 2), Fraction(3)])


@pytest.fixture(scope="session")
def table5(table2):
    return scale_amounts(table2, 500)


@pytest.fixture(scope="session")
def spec6():
    return build_spec("eq6", 3)


@pytest.fixture(scope="session")
def spec8():
    return build_spec("eq8", 3)
