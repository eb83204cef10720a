import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperseq.syntax import (
    BOT,
    And,
    Atom,
    Bottom,
    Box,
    Hypersequent,
    Neg,
    ParseError,
    Sequent,
    Sort,
    SortMismatch,
    concat_hyper,
    concat_sequents,
    degree,
    formula_image,
    hyper_image,
    impl,
    parse_formula,
    parse_hypersequent,
    parse_sequent,
    print_formula,
    print_hypersequent,
    same_hypersequent,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


def test_parse_sugar_expansion():
    assert parse_formula("box(p > q)") == Box(Neg(And(p, Neg(q))))
    assert parse_formula("bot") == Bottom()
    assert parse_formula("~box ~box p") == Neg(Box(Neg(Box(p))))
    assert parse_formula("p | q") == Neg(And(Neg(p), Neg(q)))
    assert parse_formula("dia p") == Neg(Box(Neg(p)))


def test_parse_precedence():
    # ~/box/dia bind tightest, then &, |, > (right assoc)
    assert parse_formula("~p & q") == And(Neg(p), q)
    assert parse_formula("p > q > r") == impl(p, impl(q, r))
    assert parse_formula("p & q | r") == parse_formula("(p & q) | r")
    assert parse_formula("p | q > r") == parse_formula("(p | q) > r")


def test_parse_unicode_aliases():
    assert parse_formula("□(p ⊃ q)") == parse_formula("box (p > q)")
    assert parse_formula("◇p ∧ ¬⊥") == parse_formula("dia p & ~bot")
    assert parse_sequent("p ⇒ q").sort is Sort.MODAL
    assert parse_sequent("p → q").sort is Sort.PLAIN


def test_parse_errors_have_positions():
    with pytest.raises(ParseError) as e:
        parse_formula("p & & q")
    assert e.value.position >= 0
    with pytest.raises(ParseError):
        parse_sequent("p q => r")
    with pytest.raises(ParseError):
        parse_formula("box")


def test_sequent_and_hypersequent_parsing():
    s = parse_sequent("p, box q => r")
    assert s.sort is Sort.MODAL and len(s.ant) == 2 and s.suc == (r,)
    h = parse_hypersequent("p -> p || q => q, r")
    assert len(h) == 2
    assert parse_sequent("->").is_empty()
    assert parse_sequent("=> p").ant == ()


@st.composite
def formulas(draw, depth=3):
    if depth == 0:
        return draw(st.sampled_from([p, q, r, BOT]))
    kind = draw(st.integers(0, 4))
    if kind == 0:
        return draw(st.sampled_from([p, q, r, BOT]))
    if kind == 1:
        return Neg(draw(formulas(depth=depth - 1)))
    if kind == 2:
        return And(draw(formulas(depth=depth - 1)), draw(formulas(depth=depth - 1)))
    if kind == 3:
        return Box(draw(formulas(depth=depth - 1)))
    return impl(draw(formulas(depth=depth - 1)), draw(formulas(depth=depth - 1)))


@given(formulas())
@settings(max_examples=300, deadline=None, derandomize=True)
def test_print_parse_round_trip(f):
    assert parse_formula(print_formula(f)) == f


def test_formula_image():
    assert formula_image(parse_sequent("p => q")) == parse_formula("box (p > q)")
    assert formula_image(parse_sequent("p -> p")) == parse_formula("p > p")
    # empty sides: conjunction of nothing is ~bot, disjunction bot
    assert formula_image(parse_sequent("=>")) == Box(impl(Neg(BOT), BOT))


def test_empty_image_falsified_on_reflexive_models():
    # the image of the doubly empty modalized sequent fails at every world
    # of every reflexive model (the intent behind the D rule)
    from hyperseq.semantics import FrameClass, KripkeModel, enumerate_frames, eval_formula

    img = formula_image(parse_sequent("=>"))
    for n, rel in enumerate_frames(3, FrameClass(frozenset({"reflexive"}))):
        m = KripkeModel(n, rel, frozenset())
        for w in range(n):
            assert not eval_formula(img, m, w)


def test_hyper_image():
    h = parse_hypersequent("p -> p || q -> q")
    assert hyper_image(h) == parse_formula("(p > p) | (q > q)")
    single = parse_hypersequent("p -> p")
    assert hyper_image(single) == parse_formula("p > p")
    h61 = parse_hypersequent("=> box ~box box box p || => p")
    want = parse_formula("box(~bot > box ~box box box p) | box(~bot > p)")
    assert hyper_image(h61) == want


def test_concat():
    a = parse_sequent("p -> q")
    b = parse_sequent("r -> p")
    assert concat_sequents(a, b) == parse_sequent("p, r -> q, p")
    assert concat_sequents(parse_sequent("->"), parse_sequent("->")).is_empty()
    with pytest.raises(SortMismatch):
        concat_sequents(parse_sequent("p =>"), parse_sequent("r -> p"))
    h = parse_hypersequent("p -> || q -> || -> r")
    assert concat_hyper(h) == parse_sequent("p, q -> r")
    assert concat_hyper(parse_hypersequent("p => q")) == parse_sequent("p => q")
    with pytest.raises(SortMismatch):
        concat_hyper(parse_hypersequent("p -> || q => r"))


def test_hypersequent_permutation_equality():
    a = parse_hypersequent("p -> q || r => r")
    b = parse_hypersequent("r => r || p -> q")
    assert same_hypersequent(a, b)
    assert not same_hypersequent(a, parse_hypersequent("p -> q || r -> r"))


def test_degree():
    assert degree(p) == 0
    assert degree(BOT) == 0
    assert degree(parse_formula("box ~p & q")) == 3


def test_hyper_image_permutation_semantic_equivalence():
    from hyperseq.semantics import FrameClass, truth_set, enumerate_frames, KripkeModel

    a = parse_hypersequent("p -> q || q => p")
    b = parse_hypersequent("q => p || p -> q")
    fa, fb = hyper_image(a), hyper_image(b)
    fc = FrameClass(frozenset())
    for n, rel in enumerate_frames(2, fc):
        for mask in range(16):
            cells = [(x, w) for x in ("p", "q") for w in range(n)]
            val = frozenset(c for i, c in enumerate(cells[: n * 2]) if mask >> i & 1)
            m = KripkeModel(n, rel, val)
            assert truth_set(fa, m) == truth_set(fb, m)
