import io
import json
import subprocess
import sys
import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest
from hypothesis import given, settings

from rauzy.cli import main
from rauzy.errors import ParseError, ValidationError
from rauzy.io import dump_surface, load_surface, parse_surface, surface_document
from rauzy.render import RenderSpec, render_svg
from rauzy.geometry import enumerate_saddle_connections

from conftest import SURFACES, make_surface, saddle_ac, surfaces

SVG = "{http://www.w3.org/2000/svg}"
SQRT2_60 = "1.414213562373095048801688724209698078569671875376948073176679"


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


def document(**changes):
    doc = json.loads((SURFACES / "frozen_bc.json").read_text())
    doc.update(changes)
    return doc


def write(tmp_path, doc, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return p


# -- parsing ----------------------------------------------------------------------------

def test_parse_example_documents():
    s = load_surface(SURFACES / "frozen_bc.json")
    assert s.d == 4 and s.pair.bottom == ("D", "C", "B", "A")
    for path in SURFACES.glob("*.json"):
        load_surface(path)


def test_parse_rejects_reducible():
    doc = document(top=["A", "B", "C", "D"], bottom=["A", "D", "C", "B"])
    with pytest.raises(ValidationError) as info:
        parse_surface(json.dumps(doc))
    assert info.value.detail == ("reducible", 1)


def test_parse_rejects_non_positive_length():
    doc = document()
    doc["lambda"]["B"] = {"1": "0"}
    with pytest.raises(ValidationError) as info:
        parse_surface(json.dumps(doc))
    assert info.value.detail[0] == "length"


def test_parse_rejects_bad_suspension_and_json():
    doc = document()
    doc["tau"]["A"] = {"1": "-1"}
    with pytest.raises(ValidationError) as info:
        parse_surface(json.dumps(doc))
    assert info.value.detail[0] == "suspension"
    with pytest.raises(ParseError):
        parse_surface("{not json")
    with pytest.raises(ParseError):
        parse_surface(json.dumps(document(extra=1)))
    doc = document()
    doc["tau"]["A"] = {"sqrt11": "1"}
    with pytest.raises(ValidationError):
        parse_surface(json.dumps(doc))


@given(surfaces(irrational=True))
@settings(max_examples=100, deadline=None)
def test_round_trip(s):
    text = dump_surface(s)
    back = parse_surface(text)
    assert back.pair == s.pair and back.lengths == s.lengths and back.tau == s.tau
    assert dump_surface(back) == text


def test_document_keeps_only_used_basis_names():
    doc = surface_document(saddle_ac())
    assert set(doc["basis"]) == {"sqrt2"}


# -- command line ----------------------------------------------------------------------------

def test_cli_backend_flag():
    code, out = run("--backend")
    assert code == 0 and out.strip() in ("python", "cython")


def test_cli_inspect():
    code, out = run("inspect", SURFACES / "frozen_bc.json")
    assert code == 0
    assert "valid surface" in out and "genus 2" in out and "angle 6pi" in out


def test_cli_backward_frozen_symbols():
    code, out = run("backward", SURFACES / "frozen_bc.json", "--steps", 300)
    assert code == 0
    assert "B=0, C=0" in out and "frozen: B C" in out


def test_cli_backward_rational_stop():
    code, out = run("backward", SURFACES / "frozen_bc_rational.json", "--steps", 50)
    assert code == 0
    assert "orbit stops at step 4" in out
    assert "|lambda| at the end: 7" in out


def test_cli_forward():
    code, out = run("forward", SURFACES / "swap.json", "--steps", 20)
    assert code == 0 and "ran 20 steps" in out


def test_cli_saddles(tmp_path):
    target = tmp_path / "conns.json"
    code, out = run("saddles", SURFACES / "saddle_ac.json", "--max-length", 10, "--out", target)
    assert code == 0 and "a1 -> a3  length 2" in out
    data = json.loads(target.read_text())
    assert len(data["connections"]) == 2


def test_cli_minimality():
    code, out = run("minimality", SURFACES / "saddle_ac.json", "--steps", 300, "--max-length", 10)
    assert code == 0 and out.startswith("nonminimal_evidence")
    code, out = run("minimality", SURFACES / "abc_minimal.json", "--steps", 50, "--max-length", 10,
                    "--json")
    assert code == 0 and out.startswith("minimal_evidence")


def test_cli_bad_document_exits_2(tmp_path, capsys):
    doc = document(top=["A", "B", "C", "D"], bottom=["A", "D", "C", "B"])
    code, _ = run("inspect", write(tmp_path, doc))
    assert code == 2
    assert "reducible" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run("backward", bad)[0] == 2
    assert run("inspect", tmp_path / "missing.json")[0] == 2


def test_cli_short_witness_exits_4(tmp_path):
    doc = json.loads((SURFACES / "saddle_ac.json").read_text())
    doc["basis"] = {"sqrt2": SQRT2_60}
    code, _ = run("backward", write(tmp_path, doc), "--steps", 1000)
    assert code == 4


def test_log_replay_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    run("backward", SURFACES / "independent.json", "--steps", 200, "--log", a, "--checkpoint-every", 50)
    run("backward", SURFACES / "independent.json", "--steps", 200, "--log", b, "--checkpoint-every", 50)
    assert a.read_bytes() == b.read_bytes()
    lines = [json.loads(x) for x in a.read_text().splitlines()]
    assert sum(1 for x in lines if "kind" in x and "winner" in x) == 200


def test_parallel_jobs_match_serial(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    paths = [SURFACES / "independent.json", SURFACES / "frozen_bc.json"]
    run("backward", *paths, "--steps", 60, "--log", a)
    run("backward", *paths, "--steps", 60, "--log", b, "--jobs", 2)
    assert a.read_bytes() == b.read_bytes()


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rauzy.cli", "inspect", str(SURFACES / "swap.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "d = 2" in proc.stdout


# -- rendering -------------------------------------------------------------------------------

def elements(svg, cls):
    root = ET.fromstring(svg)
    return [e for e in root.iter() if cls in e.get("class", "").split()]


def test_render_swap_polygon():
    svg = render_svg(load_surface(SURFACES / "swap.json"))
    assert len(elements(svg, "side")) == 4
    assert len(elements(svg, "vertex")) == 4


def test_render_connection_length():
    s = saddle_ac()
    conns = tuple(enumerate_saddle_connections(s, 10))
    svg = render_svg(s, RenderSpec("polygon", Fraction(50), connections=conns))
    lines = elements(svg, "saddle-connection")
    assert len(lines) == 2
    for e in lines:
        assert e.get("stroke-dasharray")
        assert Fraction(e.get("x2")) - Fraction(e.get("x1")) == 100


def test_render_zippered_rectangles():
    s = make_surface("A B", "B A", [1, 1], [1, -1])
    rects = elements(render_svg(s, RenderSpec("zippered", Fraction(10))), "rectangle")
    assert len(rects) == 2
    assert all(Fraction(r.get("height")) == 10 for r in rects)


def test_cli_render_targets(tmp_path):
    for target in ("polygon", "zippered", "trace"):
        out = tmp_path / f"{target}.svg"
        code, _ = run("render", SURFACES / "saddle_ac.json", "--out", out, "--target", target,
                      "--connections", "--start", "a1")
        assert code == 0
        ET.parse(out)
