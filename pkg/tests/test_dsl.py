import math

import numpy as np
import pytest

from pwspherical.errors import DSLError
from pwspherical.functions import ClassFunction, RadialFunction
from pwspherical.dsl import parse_function_dsl
from pwspherical.geometry import catalog_space
from pwspherical.special import spherical_eval

S2 = catalog_space("s2")


def test_bump_defaults_and_sharpness():
    f = parse_function_dsl("bump(r=1.0)")
    assert isinstance(f, RadialFunction) and f.form == "bump"
    assert f.params == {"r": 1.0, "p": 1.0}
    g = parse_function_dsl("  bump( r = 0.5 , p=2 ) ")
    assert g.params == {"r": 0.5, "p": 2.0} and g.support == 0.5


def test_cospow_and_spherical():
    f = parse_function_dsl("cospow(r=1.2,q=4)")
    assert f.form == "cospow" and f.params["q"] == 4
    h = parse_function_dsl("sph(l=3)", space=S2)
    t = np.linspace(0, math.pi, 11)
    assert np.allclose(h(t), spherical_eval(S2, 3, t), atol=1e-14)


def test_class_targets():
    assert parse_function_dsl("char(n=3)", target="class").form == "char"
    b = parse_function_dsl("bump(r=1.0)", target="class")
    assert isinstance(b, ClassFunction) and b.form == "bump_angle"


def test_samples_file(tmp_path):
    grid = np.linspace(0, math.pi, 65)
    path = tmp_path / "f.csv"
    path.write_text("t,value\n" + "".join(f"{float(a)!r},{math.cos(a)!r}\n" for a in grid))
    f = parse_function_dsl(f"samples({path})")
    assert f.form == "samples"
    assert np.max(np.abs(f(grid) - np.cos(grid))) <= 1e-12


@pytest.mark.parametrize("text,position", [
    ("bump(r=4.0)", 7),
    ("bump(r=abc)", 7),
    ("bump(r=1.0,p=-1)", 13),
    ("cospow(r=1.0,q=0)", 15),
    ("cospow(r=1.0,q=2.5)", 15),
    ("bump(s=1.0)", 5),
    ("bump(r=1.0,r=2.0)", 11),
    ("wave(r=1.0)", 0),
    ("bump(r=1.0) x", 12),
    ("cospow(r=1.0)", 7),
])
def test_errors_carry_position(text, position):
    with pytest.raises(DSLError) as info:
        parse_function_dsl(text)
    assert info.value.position == position
    assert info.value.text == text


@pytest.mark.parametrize("text,kw", [
    ("char(n=2)", {}),
    ("sph(l=2)", {}),
    ("cospow(r=1.0,q=2)", {"target": "class"}),
    ("char(n=-1)", {"target": "class"}),
    ("samples(/no/such/file.csv)", {}),
    ("bump r=1", {}),
])
def test_rejected_descriptors(text, kw):
    with pytest.raises(DSLError):
        parse_function_dsl(text, **kw)


def test_dsl_error_is_a_value_error():
    with pytest.raises(ValueError):
        parse_function_dsl("bump(r=0)")
