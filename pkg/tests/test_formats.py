import json

import numpy as np
import pytest

from zonalspd.errors import DuplicatePoint, InvalidField
from zonalspd.formats import dump_spec, load_spec, parse_space, read_points, write_points
from zonalspd.kernels import validate_expansion
from zonalspd.spaces import Space, random_points

from conftest import SPACES, geometric_spec


@pytest.mark.parametrize("s", SPACES, ids=str)
def test_points_round_trip(s, tmp_path):
    pts = random_points(s, 5, 9)
    path = tmp_path / "pts.csv"
    write_points(path, s, pts)
    assert path.read_text().splitlines()[0] == f"# space={s.family.value},d={s.d}"
    s2, back = read_points(path)
    assert s2 == s and back == pts


def test_row_widths(tmp_path):
    widths = {"circle:1": 1, "sphere:2": 3, "real_projective:3": 4, "complex_projective:4": 6, "quaternion_projective:8": 12}
    for text, w in widths.items():
        s = parse_space(text)
        path = tmp_path / "p.csv"
        write_points(path, s, random_points(s, 2, 0))
        assert len(path.read_text().splitlines()[1].split(",")) == w


def test_duplicate_row(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("# space=sphere,d=2\n1,0,0\n0,1,0\n1,0,0\n")
    with pytest.raises(DuplicatePoint, match="duplicate point"):
        read_points(path)
    # same projective point written with opposite signs
    path.write_text("# space=real_projective,d=2\n0,1,0\n0,-1,0\n")
    with pytest.raises(DuplicatePoint):
        read_points(path)


@pytest.mark.parametrize("text,field", [
    ("space=sphere,d=2\n1,0,0\n", "points.header"),
    ("# space=sphere,d=2\n1,0\n", "points line 2"),
    ("# space=sphere,d=2\n1,1,0\n", "points line 2"),
    ("# space=sphere,d=2\n1,a,0\n", "points line 2"),
    ("# space=sphere,d=2\n", "points"),
    ("# space=cayley_plane,d=16\n1\n", "points.header"),
])
def test_bad_points(tmp_path, text, field):
    path = tmp_path / "p.csv"
    path.write_text(text)
    with pytest.raises(InvalidField) as info:
        read_points(path)
    assert str(info.value).startswith(field)


def test_spec_files(tmp_path):
    e = validate_expansion(geometric_spec(Space("complex_projective", 6), 0.3, [(2, 0)], [3]))
    path = tmp_path / "k.json"
    dump_spec(e, path)
    assert load_spec(path) == e
    path.write_text("{not json")
    with pytest.raises(InvalidField, match="spec"):
        load_spec(path)


def test_documented_spec_shape(tmp_path):
    path = tmp_path / "k.json"
    path.write_text(json.dumps({"space": {"family": "sphere", "d": 2}, "coeffs": {"type": "finite", "values": [[0, 1.0], [3, 2.0]]}}))
    e = load_spec(path)
    assert e.coefficient(3) == 2.0 and np.isclose(e.coefficient(0), 1.0)


def test_parse_space():
    assert parse_space("sphere:1") == Space("circle", 1)
    for bad in ("sphere", "sphere:x", "torus:2"):
        with pytest.raises(InvalidField):
            parse_space(bad)
