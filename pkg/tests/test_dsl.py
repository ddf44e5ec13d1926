import pytest

from fgt.dsl import build_from_expr, parse_expr
from fgt.errors import OrderCapExceeded, ParseError


@pytest.mark.parametrize("text,canon,order", [
    ("C(6)", "C(6)", 6),
    ("S(4)", "S(4)", 24),
    ("C(2)xC(2)", "C(2)xC(2)", 4),
    ("C(2) x C(2)", "C(2)xC(2)", 4),
    ("D(12)", "D(12)", 12),
    ("Dic(8)", "Dic(8)", 8),
    ("Q8", "Q8", 8),
    ("SL23", "SL23", 24),
    ("SL(2,3)", "SL23", 24),
    ("M16", "M16", 16),
    ("E(2,3)", "E(2,3)", 8),
    ("perm[(1 2 3)(4 5), (1 2)]", "perm[(1 2 3)(4 5),(1 2)]", 12),
    ("table[[0,1],[1,0]]", "table[[0,1],[1,0]]", 2),
    ("C(2)xC(3)xC(5)", "C(2)xC(3)xC(5)", 30),
])
def test_parse_and_build(text, canon, order):
    expr = parse_expr(text)
    assert expr.canonical() == canon
    g = build_from_expr(expr)
    assert g.order == order
    assert g.name == canon


def test_canonical_reparse_stable():
    for text in ("C(4)xD(6)", "perm[(1 2),(3 4)]", "SL(2,3)xC(2)"):
        canon = parse_expr(text).canonical()
        assert parse_expr(canon).canonical() == canon


@pytest.mark.parametrize("bad", [
    "", "C(", "Z(3)", "SL(3,3)", "perm[(1 2", "C(2)y C(3)", "D()",
    "E(4,2)", "Dic(6)", "table[[0,1],[1]]", "tablenotjson",
])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        build_from_expr(bad)


def test_cap_propagates():
    with pytest.raises(OrderCapExceeded):
        build_from_expr("C(10)xC(10)", table_cap=50)


def test_products_fold_left():
    g = build_from_expr("C(2)xC(3)xC(2)")
    assert g.order == 12
    assert g.is_abelian()
