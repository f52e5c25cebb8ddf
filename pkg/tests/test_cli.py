import json

import pytest

from examdown.cli import run

CAS_DOC = "We calculate \\(6\\times 3={@6*3@}\\).\n"


@pytest.fixture
def doc_path(tmp_path):
    path = tmp_path / "doc.mdx.txt"
    path.write_text(CAS_DOC, encoding="utf-8")
    return str(path)


def test_render_html_contains_calculated_value(doc_path, capsys):
    assert run(["render", "--format", "html", doc_path]) == 0
    out = capsys.readouterr().out
    assert "<mn>18</mn>" in out


def test_render_no_calc_keeps_raw(doc_path, capsys):
    assert run(["render", "--format", "html", "--no-calc", doc_path]) == 0
    out = capsys.readouterr().out
    assert "{@6*3@}" in out and "<mn>18</mn>" not in out


def test_render_latex_format(doc_path, capsys):
    assert run(["render", "--format", "latex", doc_path]) == 0
    out = capsys.readouterr().out
    assert "6 \\times 3" in out


def test_render_json_ast(doc_path, capsys):
    assert run(["render", "--format", "json-ast", doc_path]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["blocks"][0]["type"] == "paragraph"


def test_render_deterministic(doc_path, capsys):
    run(["render", "--format", "html", doc_path])
    first = capsys.readouterr().out
    run(["render", "--format", "html", doc_path])
    second = capsys.readouterr().out
    assert first == second


def test_answers_empty(tmp_path, capsys):
    path = tmp_path / "empty.mdx.txt"
    path.write_text("", encoding="utf-8")
    assert run(["answers", str(path)]) == 0
    assert capsys.readouterr().out.strip() == "[]"


def test_answers_manifest_fields(tmp_path, capsys):
    path = tmp_path / "a.mdx.txt"
    path.write_text("answer: x=1 or x=9\nanswer[q2]: 18\n", encoding="utf-8")
    assert run(["answers", str(path)]) == 0
    entries = json.loads(capsys.readouterr().out)
    assert [sorted(e.keys()) for e in entries] == [
        ["index", "label", "latex", "line", "spacemath"]] * 2
    assert entries[0]["index"] == 1 and entries[1]["label"] == "q2"


def test_check_warnings_exit_zero(tmp_path, capsys):
    path = tmp_path / "broken.mdx.txt"
    path.write_text("Consider $x (t$ here.\n", encoding="utf-8")
    assert run(["check", str(path)]) == 0
    out = capsys.readouterr().out
    assert "unclosed-bracket" in out
    line = out.strip().splitlines()[0]
    # "line:col severity code message"
    pos, severity, code = line.split(" ", 3)[:3]
    assert ":" in pos and severity == "warning" and code == "unclosed-bracket"


def test_check_clean_document(tmp_path, capsys):
    path = tmp_path / "ok.mdx.txt"
    path.write_text("Nothing odd here.\n", encoding="utf-8")
    assert run(["check", str(path)]) == 0
    assert capsys.readouterr().out == ""


def test_unreadable_input_exit_2(capsys):
    assert run(["render", "/nonexistent/file.mdx.txt"]) == 2
    assert "cannot read input" in capsys.readouterr().err


def test_bad_flags_exit_64(capsys):
    assert run(["render", "--format", "bogus"]) == 64
    assert run(["frobnicate"]) == 64


def test_custom_symbol_table(tmp_path, capsys):
    table = tmp_path / "syms.tsv"
    table.write_text("zeta\tgreek\t\\zeta\nsum\tbigop\t\\sum\n", encoding="utf-8")
    doc = tmp_path / "d.mdx.txt"
    doc.write_text("$pi$\n", encoding="utf-8")
    assert run(["--symbols", str(table), "render", "--format", "json-ast",
                str(doc)]) == 0
    out = capsys.readouterr().out
    # with pi absent from the table it lexes as two identifiers p·i
    assert "p i" in out


def test_symbols_env_fallback(tmp_path, capsys, monkeypatch):
    table = tmp_path / "syms.tsv"
    table.write_text("pi\tconst\t\\pi\n", encoding="utf-8")
    monkeypatch.setenv("EXAMDOWN_SYMBOLS", str(table))
    doc = tmp_path / "d.mdx.txt"
    doc.write_text("$pi$\n", encoding="utf-8")
    assert run(["render", "--format", "json-ast", str(doc)]) == 0
    assert '"spacemath": "pi"' in capsys.readouterr().out


def test_missing_symbol_table_exit_2(capsys):
    assert run(["--symbols", "/nope.tsv", "check", "-"]) == 2
