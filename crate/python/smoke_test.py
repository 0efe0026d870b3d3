"""Smoke test for the pyawdaha extension module."""

from fractions import Fraction

import pyawdaha as aw


def main():
    t = aw.Params.fixture()
    assert t == aw.Params(Fraction(1, 2), "3/5", "2/3", "5/7", "3/4")
    assert t.q == "1/4"
    assert t.abcd == ("1/2", "-8/9", "3/14", "-21/50")

    p1 = aw.sym(t, 1)
    assert p1.coeff(0) == "9085/12096", p1
    assert p1.is_symmetric()

    for m in range(-4, 5):
        tri = aw.nonsym(t, m)
        assert tri == aw.nonsym(t, m, "rodrigues") == aw.nonsym(t, m, "series")
        gamma = Fraction(t.gamma(m))
        y = aw.apply("Y", tri, t)
        assert y == tri * aw.Poly([(0, gamma)]), m

    x = aw.Poly([(1, 1)])
    assert str(aw.apply("T1", x, t)) == str(aw.Poly([(-1, "3/2"), (0, "7/12")]))

    ct = aw.constant_term(t, precision=128)
    assert ct["rel_err"] < 1e-20
    assert abs(ct["closed"] - 1.8903922036998885) < 1e-12

    g = aw.forward(t, aw.Poly([(0, 1)]), max_m=4, precision=128)
    assert list(g) == [0], g

    rep = aw.verify("hecke")
    assert rep["status"] == "pass"
    assert all(c["status"] == "pass" for c in rep["checks"])

    try:
        aw.Params(1, 2, 3)
    except TypeError:
        pass
    else:
        raise AssertionError("short parameter list accepted")
    try:
        aw.verify("hecke", backend="quaternion")
    except ValueError:
        pass
    else:
        raise AssertionError("bad backend accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
