import numpy as np
import pytest

from corona_lab.bezout import (bezout_tuple, corona_bezout, extended_euclid,
                               ideal_solve, minimal_pointwise_solution)
from corona_lab.errors import (AllZero, CommonZeroInDisk, GramianZero,
                               NotInIdealNumerically)
from corona_lab.functions import FnTuple, Poly, RationalFn

z = Poly.z()
BOUNDARY = np.exp(2j * np.pi * np.arange(256) / 256)


def pairing(F, G, pts):
    return np.sum(F.values(pts) * G.values(pts), axis=0)


def test_extended_euclid_examples():
    g, a, b = extended_euclid(z - 2, z - 3)
    assert g.allclose(1) and a.allclose(1) and b.allclose(-1)
    g, a, b = extended_euclid(z ** 2, 1 - z)
    assert g.allclose(1) and a.allclose(1, 1e-12) and b.allclose(Poly([1, 1]), 1e-12)
    g, a, b = extended_euclid((z - 2) ** 2, (z - 2) * (z - 3))
    assert g.allclose(z - 2, 1e-10) and a.allclose(1, 1e-10) and b.allclose(-1, 1e-10)


def test_extended_euclid_zero_and_unit_cases():
    g, a, b = extended_euclid(Poly([0, 2]), Poly())
    assert g.allclose(z) and a.allclose(0.5) and b.is_zero()
    g, a, b = extended_euclid(Poly(1), Poly(7))
    assert g.allclose(1) and (a * 1 + b * 7).allclose(1)
    with pytest.raises(AllZero):
        extended_euclid(Poly(), Poly())


def random_poly(rng, deg):
    return Poly(rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1))


def test_extended_euclid_degree_bounds_random():
    rng = np.random.default_rng(8)
    for _ in range(200):
        common = random_poly(rng, int(rng.integers(0, 3)))
        p = common * random_poly(rng, int(rng.integers(1, 5)))
        q = common * random_poly(rng, int(rng.integers(1, 5)))
        g, a, b = extended_euclid(p, q)
        assert abs(g.lead - 1) < 1e-12
        assert a.degree < q.degree - g.degree
        assert b.degree < p.degree - g.degree
        scale = 1 + a.coeff_sum() * p.coeff_sum() + b.coeff_sum() * q.coeff_sum()
        assert (a * p + b * q).allclose(g, 1e-10 * scale)


def test_bezout_tuple_examples():
    cert = bezout_tuple(FnTuple((z - 2, z - 3)))
    assert cert.gcd.allclose(1)
    assert cert.cofactors[0].allclose(1) and cert.cofactors[1].allclose(-1)
    cert = bezout_tuple(FnTuple((z ** 2, 1 - z, Poly(7))))
    assert cert.gcd.allclose(1)
    assert cert.cofactors[0].is_zero() and cert.cofactors[1].is_zero()
    assert cert.cofactors[2].allclose(1 / 7)
    cert = bezout_tuple(FnTuple(((z - 2) ** 2, (z - 2) * (z - 3))))
    assert cert.gcd.allclose(z - 2, 1e-10)
    with pytest.raises(AllZero):
        bezout_tuple(FnTuple((Poly(), Poly())))


def test_bezout_certificate_json():
    d = bezout_tuple(FnTuple((z - 2, z - 3))).to_json()
    assert set(d) == {"gcd", "cofactors", "residual"}
    assert d["gcd"] == [[1.0, 0.0]]


def test_corona_bezout_examples():
    F = FnTuple(((z - 2) ** 2, (z - 2) * (z - 3)))
    G = corona_bezout(F)
    for g, sign in zip(G, (1, -1)):
        assert g.den.allclose(z - 2, 1e-10)
        assert g.num.allclose(sign, 1e-10)
    assert np.abs(pairing(F, G, BOUNDARY) - 1).max() < 1e-12

    F = FnTuple((Poly([0.8, 0.1]), Poly(0.5)))
    G = corona_bezout(F)
    assert np.abs(pairing(F, G, BOUNDARY) - 1).max() <= 1e-10
    assert G[0].is_zero() and G[1].num.allclose(2)

    with pytest.raises(CommonZeroInDisk) as err:
        corona_bezout(FnTuple((z, z ** 2)))
    assert abs(err.value.roots[0]) < 1e-12


def test_corona_bezout_rational_entries():
    F = FnTuple((RationalFn(z, z - 3), RationalFn(1 - z, z + 2)))
    G = corona_bezout(F)
    assert np.abs(pairing(F, G, BOUNDARY) - 1).max() < 1e-12


def test_corona_bezout_single_entry():
    f = Poly([0.6, 0.2])
    G = corona_bezout(FnTuple((f,)))
    pts = 0.9 * BOUNDARY
    assert np.allclose(G[0](pts), 1 / f(pts))


def test_ideal_solve_examples():
    F = FnTuple((z - 2, z - 3))
    G = ideal_solve(F, z)
    assert G[0].num.allclose(z) and G[1].num.allclose(-z)
    G = ideal_solve(FnTuple((z, 1 - z)), Poly())
    assert all(g.is_zero() for g in G)
    with pytest.raises(NotInIdealNumerically):
        ideal_solve(FnTuple((z ** 2, z)), Poly(1))


def test_ideal_solve_with_common_factor_dividing_h():
    F = FnTuple((z * (z - 3), z * (z + 2)))
    h = z * Poly([0.5, 1j])
    G = ideal_solve(F, h)
    assert np.abs(pairing(F, G, BOUNDARY) - h(BOUNDARY)).max() < 1e-10


def test_random_coprime_tuples():
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 9))
        F = FnTuple(tuple(random_poly(rng, int(rng.integers(0, 7))) for _ in range(n)))
        try:
            G = corona_bezout(F)
        except CommonZeroInDisk:
            continue
        worst = max(worst, np.abs(pairing(F, G, BOUNDARY) - 1).max())
    assert worst <= 1e-9


def test_minimal_pointwise_examples():
    assert np.allclose(minimal_pointwise_solution(FnTuple((Poly(1),)), 0.3), [1])
    assert np.allclose(minimal_pointwise_solution(FnTuple((Poly(0.8), Poly(0.6))), 0.1j),
                       [0.8, 0.6])
    assert np.allclose(minimal_pointwise_solution(FnTuple((Poly([0.8, 0.1]), Poly(0.5))), 0),
                       np.array([0.8, 0.5]) / 0.89)
    with pytest.raises(GramianZero):
        minimal_pointwise_solution(FnTuple((z,)), 0)


def test_pointwise_solution_is_minimal():
    rng = np.random.default_rng(4)
    for _ in range(50):
        n = int(rng.integers(2, 6))
        F = FnTuple(tuple(random_poly(rng, 3) for _ in range(n)))
        try:
            G = corona_bezout(F)
        except CommonZeroInDisk:
            continue
        for w in 0.95 * np.sqrt(rng.random(8)) * np.exp(2j * np.pi * rng.random(8)):
            v = minimal_pointwise_solution(F, w)
            assert np.isclose(F.values(w) @ v, 1)
            assert np.linalg.norm(G.values(w)) >= np.linalg.norm(v) - 1e-10
