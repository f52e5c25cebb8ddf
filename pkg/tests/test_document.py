import xml.etree.ElementTree as ET
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from examdown.calcengine import Calculator
from examdown.docrender import render_document_html
from examdown.document import (
    AnswerLine, CalcPlaceholder, CodeFence, CodeSpan, Derivation, DisplayMath,
    Document, InlineMath, ListItemGroup, Paragraph, PlotPlaceholder,
    extract_answers, parse_document,
)
from examdown.mathexpr.ast import Relation, Times


def codes(doc):
    return [d.code for d in doc.diagnostics]


def body_text(html):
    root = ET.fromstring(html.split("\n", 1)[1])
    body = root.find("body")
    return " ".join(t.strip() for t in body.itertext() if t.strip())


# ----------------------------------------------------------------------
# spec examples

def test_cas_text_paragraph_structure():
    from examdown.mathexpr.ast import Integer

    doc = parse_document("We calculate \\(6\\times 3={@6*3@}\\).")
    (para,) = doc.blocks
    kinds = [type(i).__name__ for i in para.inlines]
    assert kinds == ["Text", "InlineMath", "CalcPlaceholder", "Text"]
    calc = para.inlines[2]
    assert calc.raw == "{@6*3@}"
    assert calc.expr == Times(Integer(6), Integer(3), explicit=True)
    assert isinstance(para.inlines[1].expr, Relation)


def test_derivation_block():
    doc = parse_document(
        ":::derivation\n x^2-10x+9=0\n<=> (x-5)^2-16=0 | Complete the square\n:::")
    (deriv,) = doc.blocks
    assert isinstance(deriv, Derivation)
    assert len(deriv.rows) == 2
    assert deriv.rows[0].relator is None
    assert deriv.rows[1].relator == "<=>"
    assert deriv.rows[1].justification == "Complete the square"


def test_lone_dollar_is_literal():
    doc = parse_document("The fee is $5 today")
    (para,) = doc.blocks
    assert [type(i).__name__ for i in para.inlines] == ["Text"]
    assert para.inlines[0].text == "The fee is $5 today"
    assert [(c, s) for c, s in [(d.code, d.severity) for d in doc.diagnostics]] == [
        ("lone-dollar", "info")]


def test_answer_line_with_or():
    doc = parse_document("answer: x=1 or x=9")
    (ans,) = doc.blocks
    assert isinstance(ans, AnswerLine)
    assert ans.label is None and not ans.malformed
    assert isinstance(ans.expr, Relation)


def test_labeled_answer():
    doc = parse_document("answer[q2]: 18")
    manifest = extract_answers(doc)
    (entry,) = manifest.entries
    assert entry.label == "q2" and entry.spacemath == "18"


def test_manifest_order_and_indices():
    doc = parse_document("answer: 1\n\ntext\n\nanswer[b]: 2\nanswer: 3\n")
    manifest = extract_answers(doc)
    assert [e.index for e in manifest.entries] == [1, 2, 3]
    assert [e.spacemath for e in manifest.entries] == ["1", "2", "3"]
    assert manifest.to_json_obj()[1]["label"] == "b"
    assert sorted(manifest.to_json_obj()[0].keys()) == [
        "index", "label", "latex", "line", "spacemath"]


def test_empty_manifest():
    assert extract_answers(parse_document("no answers here")).entries == []


def test_malformed_answer_flagged():
    doc = parse_document("answer:")
    (ans,) = doc.blocks
    assert ans.malformed
    assert "malformed-answer" in codes(doc)


# ----------------------------------------------------------------------
# markdown subset

def test_heading_levels():
    doc = parse_document("# One\n\n### Three deep\n")
    assert [b.level for b in doc.blocks] == [1, 3]


def test_lists():
    doc = parse_document("- a\n- b\n\n1. x\n2. y\n")
    ul, ol = doc.blocks
    assert isinstance(ul, ListItemGroup) and not ul.ordered and len(ul.items) == 2
    assert isinstance(ol, ListItemGroup) and ol.ordered and len(ol.items) == 2


def test_emphasis_and_strong():
    doc = parse_document("so *em* and **strong** here")
    kinds = [type(i).__name__ for i in doc.blocks[0].inlines]
    assert "Emphasis" in kinds and "Strong" in kinds


def test_code_span_opacity():
    doc = parse_document("code `$x^2$ {@1+1@}` end")
    (para,) = doc.blocks
    kinds = [type(i).__name__ for i in para.inlines]
    assert kinds == ["Text", "CodeSpan", "Text"]
    assert para.inlines[1].text == "$x^2$ {@1+1@}"


def test_code_fence_verbatim():
    doc = parse_document("```\n$math$ {@2*2@}\n:::derivation\n```\nafter\n")
    fence = doc.blocks[0]
    assert isinstance(fence, CodeFence)
    assert fence.text == "$math$ {@2*2@}\n:::derivation"
    assert not any(isinstance(b, Derivation) for b in doc.blocks)


def test_display_math_block():
    doc = parse_document("$$\nsum_(i=1)^n i\n$$\n")
    (block,) = doc.blocks
    assert isinstance(block, DisplayMath)


def test_inline_math_dialects():
    doc = parse_document("both $x^2$ and \\(\\frac{1}{2}\\) kinds")
    maths = [i for i in doc.blocks[0].inlines if isinstance(i, InlineMath)]
    assert [m.dialect for m in maths] == ["space-math", "latex"]


def test_plot_placeholder():
    doc = parse_document("{@plot(x^2/(1+x^2),[x,-3,3])@}")
    ph = doc.blocks[0].inlines[0]
    assert isinstance(ph, PlotPlaceholder)
    assert ph.binder == "x"
    assert (ph.lower, ph.upper) == (Fraction(-3), Fraction(3))


def test_bad_plot_falls_back_to_calc():
    doc = parse_document("{@plot(x^2, x)@}")
    ph = doc.blocks[0].inlines[0]
    assert isinstance(ph, CalcPlaceholder)
    assert "bad-plot" in codes(doc)


def test_unclosed_placeholder_runs_to_eol():
    doc = parse_document("a {@6*3 and\nnext line")
    assert "unclosed-placeholder" in codes(doc)


def test_nested_placeholder_outer_wins():
    doc = parse_document("{@ a {@ b @} c @}")
    (para,) = doc.blocks
    phs = [i for i in para.inlines if isinstance(i, CalcPlaceholder)]
    assert len(phs) == 1
    assert phs[0].raw == "{@ a {@ b @} c @}"
    assert "nested-placeholder" in codes(doc)


def test_unknown_fence_is_paragraph():
    doc = parse_document(":::mystery\nstuff\n:::\n")
    assert "unknown-fence" in codes(doc)
    assert any(isinstance(b, Paragraph) for b in doc.blocks)


# ----------------------------------------------------------------------
# invariants

def test_source_cover():
    src = "\n\n# H\n\ntext $x$\n\nanswer: 1\n\n\n"
    doc = parse_document(src)
    spans = [b.span for b in doc.blocks]
    assert spans[0].start == 0
    assert spans[-1].end == len(src)
    for a, b in zip(spans, spans[1:]):
        assert a.end == b.start


def test_whitespace_only_source_still_covered():
    doc = parse_document("  \n\n  ")
    assert len(doc.blocks) == 1
    assert doc.blocks[0].span.start == 0 and doc.blocks[0].span.end == 6


def test_empty_document():
    doc = parse_document("")
    assert doc.blocks == []
    html, _ = render_document_html(doc, None)
    assert ET.fromstring(html.split("\n", 1)[1]).find("body") is not None


@settings(max_examples=150, deadline=None)
@given(st.text(max_size=300))
def test_parse_document_total(source):
    doc = parse_document(source)
    assert isinstance(doc, Document)
    if doc.blocks:
        assert doc.blocks[0].span.start == 0
        assert doc.blocks[-1].span.end == len(source)
        for a, b in zip(doc.blocks, doc.blocks[1:]):
            assert a.span.end == b.span.start


@settings(max_examples=60, deadline=None)
@given(st.text(alphabet="ab$`*{}@ \n^_()[]\\#-0123456789xyz", max_size=200))
def test_render_total_and_wellformed(source):
    doc = parse_document(source)
    html, _ = render_document_html(doc, Calculator())
    ET.fromstring(html.split("\n", 1)[1])


@settings(max_examples=80, deadline=None)
@given(st.text(alphabet="x^2$+{@}`1 ", max_size=60))
def test_code_span_never_math(payload):
    doc = parse_document(f"a `{payload}` b" if "`" not in payload else "a `x` b")
    for block in doc.blocks:
        for inline in getattr(block, "inlines", []):
            if isinstance(inline, CodeSpan):
                assert not isinstance(inline, (InlineMath, CalcPlaceholder))


# ----------------------------------------------------------------------
# rendering

def test_cas_render_with_calculator():
    doc = parse_document("We calculate \\(6\\times 3={@6*3@}\\).")
    html, _ = render_document_html(doc, Calculator())
    assert "6 × 3 = 18" in body_text(html)


def test_cas_render_calc_free_keeps_raw():
    doc = parse_document("We calculate \\(6\\times 3={@6*3@}\\).")
    html, _ = render_document_html(doc, None)
    assert "{@6*3@}" in body_text(html)
    assert "calculator off" in body_text(html)


def test_calc_free_rendering_never_evaluates():
    import time
    doc = parse_document("{@2^(10^14)@}")
    started = time.monotonic()
    html, diags = render_document_html(doc, None)
    assert time.monotonic() - started < 1.0
    assert "{@2^(10^14)@}" in body_text(html)
    assert diags == []


def test_eval_failure_degrades_with_warning():
    doc = parse_document("{@1/0@}")
    html, diags = render_document_html(doc, Calculator())
    assert "{@1/0@}" in body_text(html)
    assert [d.code for d in diags] == ["calc-error"]


def test_answer_highlight_and_derivation_table():
    doc = parse_document(
        "answer: 42\n\n:::derivation\nx=1\n<=> x-1=0 | subtract\n:::\n")
    html, _ = render_document_html(doc, None)
    assert 'class="answer"' in html
    assert 'class="derivation"' in html
    root = ET.fromstring(html.split("\n", 1)[1])
    rows = root.findall(".//table/tr")
    assert len(rows) == 2
    assert [len(r) for r in rows] == [3, 3]


def test_render_deterministic():
    doc = parse_document("# t\n\n$x^2$ and {@6*3@}\n\nanswer: 1\n")
    a, _ = render_document_html(doc, Calculator())
    b, _ = render_document_html(doc, Calculator())
    assert a == b
