import pytest

from lieforge.hierarchy import REAL_JET, catalogue_member
from lieforge.symmetry import ansatz_dictionary, determining_system, discover_symmetries


@pytest.fixture(scope="session")
def member2():
    return catalogue_member(2)


@pytest.fixture(scope="session")
def member3():
    return catalogue_member(3)


@pytest.fixture(scope="session")
def member4():
    return catalogue_member(4)


@pytest.fixture(scope="session")
def discovery2(member2):
    basis = ansatz_dictionary(REAL_JET, degree=2)
    det = determining_system(member2, basis)
    fields = discover_symmetries(member2, basis, det)
    return basis, det, fields


@pytest.fixture(scope="session")
def discovery4(member4):
    basis = ansatz_dictionary(REAL_JET, degree=2, trig_order=2, exp_range=1)
    det = determining_system(member4, basis)
    fields = discover_symmetries(member4, basis, det)
    return basis, det, fields
