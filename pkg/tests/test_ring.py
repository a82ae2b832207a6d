import pytest

from lodua import InvalidInput, UnsupportedRing, make_ring, normal_form
from lodua.expr import ParseError, parse_poly
from lodua.poly import QQ


def test_make_integers():
    Z = make_ring({"base": "Z"})
    assert Z.el(0).is_zero()
    assert (Z.el(2) + Z.el(3)) == Z.el(5)
    assert repr(Z) == "ZZ"


def test_make_f2_poly():
    R = make_ring({"base": "Fp", "p": 2, "vars": ["x", "y"]})
    x, y = R.var("x"), R.var("y")
    assert (x + y) ** 2 == x * x + y * y


def test_make_5adic_spot_checks():
    # 5-adic sums and products, checked by hand mod 5^3
    Z5 = make_ring({"base": "Z", "completion": {"ideal": ["5"], "precision": 3}})
    assert Z5.el(126) == Z5.el(1)
    assert Z5.el(100) + Z5.el(30) == Z5.el(5)       # 130 = 125 + 5
    assert Z5.el(26) * Z5.el(26) == Z5.el(51)       # 676 = 5*125 + 51
    assert Z5.el(124) + Z5.el(1) == Z5.el(0)


def test_nonprime_completion_rejected():
    with pytest.raises(UnsupportedRing):
        make_ring({"base": "Z", "completion": {"ideal": ["6"], "precision": 3}})


def test_bad_precision_rejected():
    with pytest.raises(InvalidInput):
        make_ring({"base": "Z", "completion": {"ideal": ["5"], "precision": 0}})


def test_normal_form_quotient():
    # divide x^3 by x^2 - y by hand: x^3 = x(x^2 - y) + xy
    Q = make_ring({"base": "Q", "vars": ["x", "y"], "quotient": ["x^2 - y"]})
    assert normal_form(Q, "x^3") == Q.el("x*y")
    assert normal_form(Q, "0").is_zero()


def test_normal_form_idempotent():
    Q = make_ring({"base": "Q", "vars": ["x", "y"], "quotient": ["x^2 - y"]})
    for raw in ["x^3", "x^2*y - y^2 + 7", "(x + y)^3", "x^5 - x"]:
        once = normal_form(Q, raw)
        assert normal_form(Q, once.num) == once


def test_localization_canonical_form():
    Zl = make_ring({"base": "Z", "invert": "5"})
    assert Zl.el(10, dexp=1) == Zl.el(2)
    e = Zl.el(3, dexp=2)
    assert e.dexp == 2
    assert Zl.el(5).is_unit()
    assert Zl.el(5).inv() == Zl.el(1, dexp=1)
    assert (Zl.el(5) * Zl.el(5).inv()) == Zl.one()


def test_localizing_at_zero_divisor_rejected():
    with pytest.raises(InvalidInput):
        make_ring({"base": "Q", "vars": ["x", "y"],
                   "quotient": ["x*y"], "invert": "x"})


def test_localizing_unit_is_identity():
    Q = make_ring({"base": "Q", "vars": ["x"]})
    assert Q.localized(Q.el(3)) is Q


def test_completed_quotient_inverse():
    C = make_ring({"base": "Q", "vars": ["x", "y"],
                   "completion": {"ideal": ["x + y", "x*y"], "precision": 4}})
    u = C.el("1 + x")
    assert (u * u.inv()) == C.one()
    assert not C.el("x + y").is_unit()


def test_parse_error_positions():
    with pytest.raises(ParseError) as err:
        parse_poly("x + @", ("x",), QQ)
    assert err.value.pos == 4
    with pytest.raises(ParseError) as err:
        parse_poly("x + z", ("x",), QQ)
    assert err.value.pos == 4
    with pytest.raises(ParseError):
        parse_poly("x^", ("x",), QQ)


def test_grammar_operations():
    Q = make_ring({"base": "Q", "vars": ["x", "y"]})
    assert Q.el("(x + y)^2 - x^2 - y^2") == Q.el("2*x*y")
    assert Q.el("-x * -1") == Q.el("x")


def test_element_hash_and_equality():
    Z = make_ring({"base": "Z"})
    assert len({Z.el(3), Z.el(3), Z.el(4)}) == 2


def test_euclidean_division_int_localized():
    Zl = make_ring({"base": "Z", "invert": "5"})
    a, b = Zl.el(7), Zl.el(3)
    q, r = Zl.divmod_el(a, b)
    assert (q * b + r) == a
    assert Zl.euclidean_size(r) < Zl.euclidean_size(b)


def test_quotient_budget_rejection():
    # a quotient whose Groebner basis cannot be computed inside the budget
    # is rejected at ring construction, not silently accepted
    import pytest
    from lodua import BudgetExceeded
    import lodua.groebner as gb
    import os
    old = os.environ.get("LODUA_BUDGET")
    os.environ["LODUA_BUDGET"] = "2"
    try:
        from lodua.ring import _RING_CACHE
        _RING_CACHE.clear()
        with pytest.raises(BudgetExceeded):
            make_ring({"base": "Q", "vars": ["x", "y"],
                       "quotient": ["x^3 - 2*x*y + 1", "x^2*y - 2*y^2 + x"]})
    finally:
        if old is None:
            del os.environ["LODUA_BUDGET"]
        else:
            os.environ["LODUA_BUDGET"] = old
        from lodua.ring import _RING_CACHE
        _RING_CACHE.clear()
