from hypothesis import given, settings
from hypothesis import strategies as st

from examdown.mathexpr.lexer import tokenize
from examdown.mathexpr.unicodemap import normalize_unicode


def kinds_and_lexemes(text):
    tokens, _ = tokenize(text)
    return [(t.kind, t.lexeme) for t in tokens]


def test_sum_example():
    assert kinds_and_lexemes("sum_(i=1)^n") == [
        ("symbol-name", "sum"),
        ("operator", "_"),
        ("bracket", "("),
        ("identifier", "i"),
        ("operator", "="),
        ("number", "1"),
        ("bracket", ")"),
        ("operator", "^"),
        ("identifier", "n"),
    ]


def test_empty_input():
    tokens, diags = tokenize("")
    assert tokens == [] and diags == []


def test_whitespace_tokens_carry_meaning():
    assert kinds_and_lexemes("x (t") == [
        ("identifier", "x"),
        ("whitespace", " "),
        ("bracket", "("),
        ("identifier", "t"),
    ]


def test_longest_match_wins():
    assert kinds_and_lexemes("int")[0] == ("symbol-name", "int")
    assert kinds_and_lexemes("inx")[0] == ("symbol-name", "in")
    assert kinds_and_lexemes("sink")[:2] == [("symbol-name", "sin"), ("identifier", "k")]


def test_multichar_operators():
    assert [l for _, l in kinds_and_lexemes("a<=>b<=c>=d!=e->f=>g")][1::2] == [
        "<=>", "<=", ">=", "!=", "->", "=>"]


def test_latex_commands_lex_as_single_tokens():
    assert kinds_and_lexemes("\\frac{1}{2}") == [
        ("symbol-name", "\\frac"),
        ("bracket", "{"),
        ("number", "1"),
        ("bracket", "}"),
        ("bracket", "{"),
        ("number", "2"),
        ("bracket", "}"),
    ]


def test_decimals_and_leading_dot():
    assert kinds_and_lexemes("1.50") == [("number", "1.50")]
    assert kinds_and_lexemes(".5") == [("number", ".5")]


def test_text_quote():
    assert kinds_and_lexemes('"so"x') == [("text-quote", '"so"'), ("identifier", "x")]


def test_unclosed_quote_warns():
    tokens, diags = tokenize('"oops')
    assert tokens[0].kind == "text-quote"
    assert [d.code for d in diags] == ["unclosed-quote"]


def test_unknown_run_is_one_token_with_warning():
    tokens, diags = tokenize("x@@¥y")
    assert [t.kind for t in tokens] == ["identifier", "unknown", "identifier"]
    assert [d.code for d in diags] == ["unknown-token"]


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=120))
def test_token_cover(source):
    """Concatenated lexemes reproduce the normalized source byte-exactly."""
    normalized = normalize_unicode(source).text
    tokens, _ = tokenize(normalized)
    assert "".join(t.lexeme for t in tokens) == normalized
    pos = 0
    for tok in tokens:
        assert tok.span.start == pos
        pos = tok.span.end
    assert pos == len(normalized)
