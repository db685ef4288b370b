import pytest

from xgroup.engine import Group


def sym_group(n: int) -> Group:
    transposition = [1, 0] + list(range(2, n))
    cycle = list(range(1, n)) + [0]
    if n == 1:
        return Group.from_generators(1, [])
    if n == 2:
        return Group.from_generators(2, [[1, 0]])
    return Group.from_generators(n, [transposition, cycle])


def cyclic_group(n: int) -> Group:
    if n == 1:
        return Group.from_generators(1, [])
    cycle = list(range(1, n)) + [0]
    return Group.from_generators(n, [cycle])


Q8_TABLE = None


def quaternion8() -> Group:
    # i, j as degree-8 regular permutations of {1,-1,i,-i,j,-j,k,-k}
    from xgroup.constructors import two_group
    return two_group("quaternion", 8).group


@pytest.fixture(scope="session")
def s3():
    return sym_group(3)


@pytest.fixture(scope="session")
def s4():
    return sym_group(4)


@pytest.fixture(scope="session")
def s5():
    return sym_group(5)


@pytest.fixture(scope="session")
def q8():
    return quaternion8()
