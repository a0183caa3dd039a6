import doctest

from polyhom import algebra


def test_algebra_doctests():
    failures, tried = doctest.testmod(algebra).failed, doctest.testmod(algebra).attempted
    assert tried > 0
    assert failures == 0
