import unicodedata

from hypothesis import given, settings
from hypothesis import strategies as st

from examdown.mathexpr.unicodemap import normalize_unicode


def test_forall_example():
    norm = normalize_unicode("∀n∈ℕ")
    assert norm.text == "AA n in NN"


def test_identity_ascii():
    norm = normalize_unicode("x")
    assert norm.text == "x"
    assert norm.diagnostics == []


def test_superscript_digits():
    # oracle: U+00B2 is SUPERSCRIPT TWO per the Unicode block table
    assert unicodedata.name("²") == "SUPERSCRIPT TWO"
    assert normalize_unicode("n²").text == "n^(2)"


def test_superscript_run_with_sign():
    assert normalize_unicode("x⁻¹").text == "x^(-1)"
    assert normalize_unicode("a²³").text == "a^(23)"


def test_operator_map():
    assert normalize_unicode("6×3").text == "6*3"
    assert normalize_unicode("a÷b").text == "a/b"
    assert normalize_unicode("a≤b≥c≠d").text == "a<=b>=c!=d"
    assert normalize_unicode("x→y⇔z").text == "x->y<=>z"
    assert normalize_unicode("−3").text == "-3"


def test_symbol_names():
    assert normalize_unicode("π").text == "pi"
    assert normalize_unicode("2π").text == "2 pi"
    assert normalize_unicode("∞").text == "oo"
    assert normalize_unicode("√2").text == "sqrt 2"
    assert normalize_unicode("∑").text == "sum"
    assert normalize_unicode("ℝ").text == "RR"


def test_greek_letters_pad_against_neighbours():
    # taν must not normalize into "tanu" (which would lex as tan·u)
    assert normalize_unicode("taν").text == "ta nu"
    assert normalize_unicode("αβ").text == "alpha beta"


def test_nfc_composition():
    # e + combining acute composes to a single character
    norm = normalize_unicode("é")
    assert norm.text == "é"
    assert [d.code for d in norm.diagnostics] == ["exotic-character"]
    assert norm.to_original(0, 1) == (0, 2)


def test_exotic_passthrough_is_info():
    norm = normalize_unicode("x☃y")
    assert norm.text == "x☃y"
    assert [(d.severity, d.code) for d in norm.diagnostics] == [("info", "exotic-character")]


def test_offset_map_spans():
    norm = normalize_unicode("a≤b")
    # "<=" occupies normalized [1,3) and maps back to the ≤ character
    assert norm.text == "a<=b"
    assert norm.to_original(1, 3) == (1, 2)
    assert norm.to_original(3, 4) == (2, 3)


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=80))
def test_total_on_arbitrary_text(source):
    norm = normalize_unicode(source)
    assert isinstance(norm.text, str)
    for diag in norm.diagnostics:
        assert 0 <= diag.span.start <= diag.span.end <= len(source)
