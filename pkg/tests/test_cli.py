import io
import json
import re

import pytest

from defeuler import cli
from defeuler.cf import CFun
from defeuler.defint import DefFun
from defeuler.document import Document, load, loads, save
from defeuler.fixtures import NAMED, cone
from defeuler.complex import path_complex


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(map(str, argv)), out)
    return code, out.getvalue()


@pytest.fixture
def docs(tmp_path):
    paths = {}
    for name, make in NAMED.items():
        paths[name] = tmp_path / f"{name}.json"
        save(make(), paths[name])
    return paths


# integrate ----------------------------------------------------------------------


def test_integrate_interval(docs):
    code, text = run("integrate", docs["interval-x"], "--measure", "floor", "--method", "closed")
    assert code == 0
    assert text.splitlines() == ["1", "~ 1"]


def test_integrate_riemann_bound(docs):
    code, text = run("integrate", docs["interval-x"], "--method", "riemann:1000")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "1" and lines[-1] == "bound 3/1000"


def test_integrate_cone_betti0(docs):
    code, text = run("integrate", docs["cone"], "--method", "betti0")
    assert (code, text.splitlines()[0]) == (0, "3")


@pytest.mark.parametrize("name", ["interval-x", "circle-h", "sphere-h", "torus-h", "cone"])
@pytest.mark.parametrize("measure", ["floor", "ceil", "avg"])
def test_methods_agree(docs, name, measure):
    methods = ["closed", "levelset", "morse", "pushline"] + (["betti0"] if name == "cone" else [])
    values = {run("integrate", docs[name], "--measure", measure, "--method", m)[1].splitlines()[0] for m in methods}
    assert len(values) == 1


def test_integrate_dchi(docs):
    for method in ("closed", "levelset", "riemann:7"):
        code, text = run("integrate", docs["square"], "--measure", "dchi", "--method", method)
        assert (code, text.splitlines()[0]) == (0, "1")
    code, _ = run("integrate", docs["interval-x"], "--measure", "dchi")
    assert code == 3


def test_integrate_incompatible(docs, tmp_path):
    assert run("integrate", docs["interval-x"], "--method", "betti0")[0] == 3
    K = path_complex([0, 1])
    path = tmp_path / "jump.json"
    save(Document(K, DefFun.from_cell_values(K, [0, 1, 2])), path)
    assert run("integrate", path, "--method", "morse")[0] == 3


@pytest.mark.parametrize("method", ["riemann:0", "riemann:x", "simpson"])
def test_integrate_bad_method(docs, method):
    assert run("integrate", docs["interval-x"], "--method", method)[0] == 2


def test_integrate_bad_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run("integrate", bad)[0] == 2
    assert run("integrate", tmp_path / "missing.json")[0] == 2


# transform ---------------------------------------------------------------------------


def test_width_and_centroid(docs):
    assert run("transform", docs["square"], "--op", "width", "--xi", "1,0", "--xi", "1,1")[1].split() == ["1", "2"]
    assert run("transform", docs["square"], "--op", "centroid", "--xi", "1,0")[1].split() == ["1/2"]


def test_dual_of_circle(docs, tmp_path):
    out = tmp_path / "d.json"
    code, _ = run("transform", docs["circle-h"], "--op", "dual", "--out", out)
    assert code == 0
    h = NAMED["circle-h"]().function
    assert load(out).function == -h


def test_link_of_torus_is_zero(docs):
    code, text = run("transform", docs["torus-h"], "--op", "link")
    assert code == 0
    g = loads(text).function
    assert set(g.cell_min) == set(g.cell_max) == {0}


def test_dual_keeps_constructible(docs):
    doc = loads(run("transform", docs["square"], "--op", "dual")[1])
    assert isinstance(doc.function, CFun)


def test_transform_errors(docs):
    assert run("transform", docs["square"], "--op", "width")[0] == 2
    assert run("transform", docs["square"], "--op", "width", "--xi", "1,")[0] == 2
    assert run("transform", docs["interval-x"], "--op", "width", "--xi", "1")[0] == 3


# sensor -----------------------------------------------------------------------------

SMALL = {
    "window": ["0", "8", "0", "8"],
    "grid": [16, 16],
    "p": "1/3",
    "targets": [
        {"type": "disk", "center": ["2", "2"], "radius": "1"},
        {"type": "rect", "min": ["5", "5"], "max": ["7", "13/2"]},
    ],
    "seeds": 3,
}


def write_config(tmp_path, **changes):
    cfg = dict(SMALL, **changes)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return path


def test_sensor_csv(tmp_path):
    code, text = run("sensor", write_config(tmp_path))
    assert code == 0
    rows = text.splitlines()
    assert rows[0] == "seed,truth,raw_estimate,smoothed_estimate"
    assert [r.split(",")[0] for r in rows[1:]] == ["0", "1", "2", "median"]
    assert all(re.fullmatch(r"-?\d+\.\d{6}", r.split(",")[2]) for r in rows[1:])
    assert "\r" not in text


def test_sensor_p_zero(tmp_path):
    code, text = run("sensor", write_config(tmp_path, p="0"), "--exact")
    assert code == 0
    for row in text.splitlines()[1:]:
        _, truth, raw, smoothed = row.split(",")
        assert raw == truth == "2"


def test_sensor_deterministic(tmp_path):
    cfg = write_config(tmp_path)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    code, summary = run("sensor", cfg, "--out", a)
    run("sensor", cfg, "--out", b)
    assert code == 0 and summary.startswith("truth 2;")
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("fmt", ["svg", "pgm"])
def test_sensor_render(tmp_path, fmt):
    outdir = tmp_path / "img"
    code, _ = run("sensor", write_config(tmp_path), "--seeds", 2, "--render", outdir, "--format", fmt)
    assert code == 0
    names = sorted(p.name for p in outdir.iterdir())
    expected = sorted([f"seed{s:03d}_{k}.{fmt}" for s in range(2) for k in ("raw", "smoothed")] + ["estimates.svg"])
    assert names == expected


@pytest.mark.parametrize(
    "changes",
    [
        {"p": "3/2"},
        {"grid": [0, 4]},
        {"targets": []},
        {"targets": [{"type": "blob"}]},
        {"targets": [{"type": "disk", "center": ["1"], "radius": "1"}]},
        {"holes": [{"type": "rect", "min": ["0", "0"], "max": ["1", "1"]}]},
        {"measure": "dx"},
        {"mode": "nearest"},
        {"seeds": 0},
        {"euler_char": 0},
        {"colour": "red"},
    ],
)
def test_sensor_config_errors(tmp_path, changes):
    assert run("sensor", write_config(tmp_path, **changes))[0] == 2


def test_sensor_support_outside(tmp_path):
    cfg = write_config(tmp_path, targets=[{"type": "disk", "center": ["0", "0"], "radius": "1"}])
    assert run("sensor", cfg)[0] == 3


def test_fixture_command(tmp_path):
    code, text = run("fixture", "cone")
    assert code == 0 and loads(text) == cone()
    out = tmp_path / "cfg.json"
    assert run("fixture", "sensor-config", "--out", out)[0] == 0
    config = cli.load_sensor_config(out)
    assert config.scene.truth == 9 and len(config.seeds) == 30


def test_parse_xi():
    assert cli.parse_xi("1/2,-3") == (cli.Fraction(1, 2), -3)
