import pytest

from lodua import BudgetExceeded, Ring, UnsupportedRing
from lodua.groebner import GBasis, groebner_ideal, ideal_basis_polys
from lodua.poly import Poly, mono_lcm, mono_div, order_key


def lexring():
    return Ring.get("Q", None, ("x", "y"), order="lex")


def test_reduced_basis_lex():
    # Buchberger by hand on (x^2 - y, y^2 - x), lex x > y:
    # x = y^2 gives x - y^2; substituting, x^2 - y becomes y^4 - y.
    R = lexring()
    g1, g2 = R.el("x^2 - y").num, R.el("y^2 - x").num
    gb = groebner_ideal([g1, g2], order="lex")
    got = {p.render(("x", "y")) for p in ideal_basis_polys(gb)}
    want = {R.el("x - y^2").num.render(("x", "y")),
            R.el("y^4 - y").num.render(("x", "y"))}
    assert got == want
    # membership cross-check
    assert gb.contains((g1,))
    assert gb.contains((g2,))


def test_single_generator_monic():
    R = lexring()
    gb = groebner_ideal([R.el("2*x^2 - 2*y").num], order="lex")
    polys = ideal_basis_polys(gb)
    assert len(polys) == 1
    assert polys[0] == R.el("x^2 - y").num


def test_unit_ideal():
    R = lexring()
    gb = groebner_ideal([R.el("x").num, R.el("y").num, R.el("1").num])
    polys = ideal_basis_polys(gb)
    assert len(polys) == 1 and polys[0].is_constant()


def test_spolynomial_closure():
    """Every S-pair of the output reduces to zero: the defining property."""
    R = lexring()
    gens = [R.el("x^2 - y").num, R.el("y^2 - x").num, R.el("x*y - 1").num]
    gb = groebner_ideal(gens, order="lex")
    polys = ideal_basis_polys(gb)
    key = order_key("lex")
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            mi, ci = polys[i].leading(key)
            mj, cj = polys[j].leading(key)
            lcm = mono_lcm(mi, mj)
            qi, qj = mono_div(lcm, mi), mono_div(lcm, mj)
            dom = polys[i].dom
            spoly = polys[i] * Poly(dom, 2, {qi: dom.inv(ci)}) \
                - polys[j] * Poly(dom, 2, {qj: dom.inv(cj)})
            assert gb.contains((spoly,))


def test_determinism():
    R = lexring()
    gens = [R.el("x^2 + y^2 - 1").num, R.el("x*y - 2").num]
    one = [p.render(("x", "y")) for p in ideal_basis_polys(groebner_ideal(gens))]
    two = [p.render(("x", "y")) for p in ideal_basis_polys(groebner_ideal(gens))]
    assert one == two


def test_cofactor_lift():
    R = lexring()
    g1, g2 = R.el("x^2 - y").num, R.el("y^2 - x").num
    gb = GBasis([(g1,), (g2,)], 1, order="lex")
    target = g1 * R.el("y").num + g2 * R.el("x^2").num
    cof = gb.lift((target,))
    assert cof is not None
    recon = cof[0] * g1 + cof[1] * g2
    assert recon == target


def test_syzygies_are_syzygies():
    R = Ring.get("Q", None, ("x", "y"))
    gens = [R.el("x").num, R.el("y").num, R.el("x + y").num]
    gb = GBasis([(g,) for g in gens], 1)
    syz = gb.syzygies()
    assert syz
    for s in syz:
        acc = Poly.zero(gens[0].dom, 2)
        for c, g in zip(s, gens):
            acc = acc + c * g
        assert acc.is_zero()


def test_budget_exceeded_carries_partial():
    R = lexring()
    gens = [R.el("x^3 - 2*x*y").num, R.el("x^2*y - 2*y^2 + x").num]
    with pytest.raises(BudgetExceeded) as err:
        groebner_ideal(gens, order="lex", budget=3)
    assert err.value.partial is not None


def test_z_restricted_to_unit_leads():
    R = Ring.get("Z", None, ("x",))
    with pytest.raises(UnsupportedRing):
        groebner_ideal([R.el("2*x").num, R.el("x + 3").num])
    # unit leading coefficients work
    gb = groebner_ideal([R.el("x - 3").num])
    assert gb.contains((R.el("x - 3").num,))
