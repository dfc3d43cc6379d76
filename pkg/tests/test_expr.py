import json

import pytest
from hypothesis import given, strategies as st

from schurcone import groups as gr
from schurcone.expr import (Cyclic, Dihedral, ExprEvalError, ExprSyntaxError, Gen, NamedSub, Product, Quaternion,
                            Quotient, Semidirect, Inversion, Symmetric, evaluate, normal_subgroup, parse_group,
                            parse_sub, subgroup_members, to_text)

leaf = st.one_of(
    st.integers(1, 40).map(Cyclic),
    st.integers(1, 40).map(Dihedral),
    st.just(Quaternion()),
    st.integers(1, 4).map(Symmetric),
)
subs = st.one_of(st.sampled_from(["derived", "center", "whole", "trivial"]).map(NamedSub),
                 st.lists(st.integers(0, 99), min_size=1, max_size=4).map(lambda xs: Gen(tuple(xs))))


def extend(children):
    return st.one_of(
        st.tuples(children, children).map(lambda t: Product(*t)),
        st.tuples(children, children).map(lambda t: Semidirect(t[0], t[1], Inversion())),
        st.tuples(children, subs).map(lambda t: Quotient(*t)),
    )


exprs = st.recursive(leaf, extend, max_leaves=6)


@given(exprs)
def test_print_parse_roundtrip(node):
    text = to_text(node)
    assert parse_group(text) == node
    assert to_text(parse_group(text)) == text


@given(exprs)
def test_whitespace_is_insignificant(node):
    text = to_text(node)
    assert parse_group(text.replace(" ", "")) == node
    assert parse_group("  " + text.replace(",", " , ") + " ") == node


def test_left_associative_product():
    assert parse_group("Z(2) x Z(3) x Z(4)") == Product(Product(Cyclic(2), Cyclic(3)), Cyclic(4))
    assert to_text(Product(Cyclic(2), Product(Cyclic(3), Cyclic(4)))) == "Z(2) x (Z(3) x Z(4))"


@pytest.mark.parametrize("text,pos", [("Z(2", 3), ("Z(2) x", 6), ("W(3)", 0), ("quot(Z(4), gen[])", 15),
                                      ("sd(Z(3), Z(2), flip)", 15), ("Z(2))", 4)])
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(ExprSyntaxError) as exc:
        parse_group(text)
    assert exc.value.pos == pos


def test_sub_parser():
    assert parse_sub("gen[1, 2]") == Gen((1, 2))
    assert parse_sub("center") == NamedSub("center")
    with pytest.raises(ExprSyntaxError):
        parse_sub("gen[1")


def test_evaluation_examples():
    assert evaluate("Z(4) x Z(2)").group.order == 8
    s3 = evaluate("sd(Z(3), Z(2), inv)").group
    assert s3.order == 6 and gr.find_isomorphism(s3, gr.symmetric(3)) is not None
    q = evaluate("quot(D(4), center)").group
    assert q.order == 4


def test_semantic_errors_deferred():
    node = parse_group("quot(S(3), gen[1])")  # parses fine
    with pytest.raises(ExprEvalError):
        evaluate(node)
    with pytest.raises(ExprEvalError):
        evaluate("S(5)")
    with pytest.raises(ExprEvalError):
        evaluate("D(8) x D(8) x Z(2)")


def test_action_file(tmp_path):
    p = tmp_path / "act.json"
    p.write_text(json.dumps({"action": [[0, 1, 2], [0, 2, 1]]}))
    g = evaluate(f"sd(Z(3), Z(2), @{p})").group
    assert gr.find_isomorphism(g, gr.symmetric(3)) is not None
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"action": [[0, 1, 2], [1, 0, 2]]}))
    with pytest.raises(ExprEvalError):
        evaluate(f"sd(Z(3), Z(2), @{bad})")


def test_named_subgroups():
    d4 = evaluate("D(4)").group
    assert subgroup_members(d4, "whole") == tuple(range(8))
    assert subgroup_members(d4, "trivial") == (0,)
    assert subgroup_members(d4, "center") == gr.center(d4).members
    assert subgroup_members(d4, "gen[1]") == gr.subgroup_closure(d4, [1])
    with pytest.raises(ExprEvalError):
        subgroup_members(d4, "gen[8]")
    with pytest.raises(ExprEvalError):
        normal_subgroup(d4, "gen[4]")
