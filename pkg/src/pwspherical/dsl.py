"""Parser for the one-line function descriptors accepted on the command line.

Grammar::

    bump(r=<float>[,p=<float>])      radial bump, or angle bump for class functions
    cospow(r=<float>,q=<int>)        radial only
    sph(l=<int>)                     spherical function of degree l (needs a space)
    char(n=<int>)                    SU(2) character, class functions only
    samples(<path>)                  two-column CSV (angle, value) on a uniform grid
"""

from __future__ import annotations

import math
import re

import numpy as np

from .errors import DSLError
from .functions import ClassFunction, RadialFunction
from .serialize import read_csv

_CALL = re.compile(r"\s*([a-z_]+)\s*\(")
_ARG = re.compile(r"\s*([a-z_]+)\s*=\s*([^,)\s]+)\s*")

_SCHEMA = {
    "bump": ({"r": float}, {"p": float}),
    "cospow": ({"r": float, "q": int}, {}),
    "sph": ({"l": int}, {}),
    "char": ({"n": int}, {}),
}


def _convert(text, name, kind, raw, pos):
    try:
        if kind is int:
            if not re.fullmatch(r"[+-]?\d+", raw):
                raise ValueError
            return int(raw)
        value = float(raw)
        if not math.isfinite(value):
            raise ValueError
        return value
    except ValueError:
        raise DSLError(f"argument {name!r} expects {kind.__name__}, got {raw!r}", text, pos) from None


def _parse_args(text, start, name):
    required, optional = _SCHEMA[name]
    allowed = {**required, **optional}
    args, where = {}, {}
    pos = start
    while True:
        if text[pos:].lstrip().startswith(")"):
            pos = text.index(")", pos) + 1
            break
        m = _ARG.match(text, pos)
        if not m:
            raise DSLError("expected key=value", text, pos)
        key, raw = m.group(1), m.group(2)
        if key not in allowed:
            raise DSLError(f"unknown argument {key!r} for {name}()", text, m.start(1))
        if key in args:
            raise DSLError(f"duplicate argument {key!r}", text, m.start(1))
        args[key] = _convert(text, key, allowed[key], raw, m.start(2))
        where[key] = m.start(2)
        pos = m.end()
        if pos < len(text) and text[pos] == ",":
            pos += 1
        elif pos >= len(text) or text[pos] != ")":
            raise DSLError("expected ',' or ')'", text, pos)
    missing = [k for k in required if k not in args]
    if missing:
        raise DSLError(f"{name}() is missing {', '.join(missing)}", text, start)
    if text[pos:].strip():
        raise DSLError("trailing characters", text, pos + len(text[pos:]) - len(text[pos:].lstrip()))
    return args, where


def _load_samples(path, text, pos):
    try:
        header, rows = read_csv(path)
    except (OSError, ValueError, IndexError) as exc:
        raise DSLError(f"cannot read samples from {path!r}: {exc}", text, pos) from None
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DSLError(f"samples file {path!r} must have two columns", text, pos)
    return arr[:, 0], arr[:, 1]


def parse_function_dsl(text: str, *, target="radial", space=None):
    """Parse ``text`` into a :class:`RadialFunction` or (``target="class"``) a :class:`ClassFunction`.

    >>> parse_function_dsl("bump(r=1.0)").support
    1.0

    Raises
    ------
    DSLError
        Syntax errors (with the character position) and out-of-range values.
    """
    if target not in ("radial", "class"):
        raise ValueError("target must be 'radial' or 'class'")
    m = _CALL.match(text)
    if not m:
        raise DSLError("expected a function name followed by '('", text, len(text) - len(text.lstrip()))
    name = m.group(1)
    if name == "samples":
        close = text.rfind(")")
        if close < m.end() or text[close + 1:].strip():
            raise DSLError("samples(<path>) needs a closing ')'", text, len(text))
        path = text[m.end():close].strip()
        if not path:
            raise DSLError("samples() needs a path", text, m.end())
        grid, values = _load_samples(path, text, m.end())
        try:
            if target == "class":
                return ClassFunction.samples(grid, values)
            return RadialFunction.samples(grid, values)
        except ValueError as exc:
            raise DSLError(str(exc), text, m.end()) from None
    if name not in _SCHEMA:
        raise DSLError(f"unknown function {name!r}", text, m.start(1))
    args, where = _parse_args(text, m.end(), name)

    if name in ("bump", "cospow"):
        r = args["r"]
        if not 0 < r < math.pi:
            raise DSLError(f"radius r={r!r} outside (0, pi)", text, where["r"])
        if args.get("p", 1.0) <= 0:
            raise DSLError(f"sharpness p={args['p']!r} must be positive", text, where.get("p"))
    if name == "bump":
        if target == "class":
            return ClassFunction.bump_angle(args["r"], args.get("p", 1.0))
        return RadialFunction.bump(args["r"], args.get("p", 1.0))
    if name == "cospow":
        if target == "class":
            raise DSLError("cospow() describes radial functions only", text, m.start(1))
        if args["q"] < 1:
            raise DSLError(f"power q={args['q']} must be >= 1", text, where["q"])
        return RadialFunction.cospow(args["r"], args["q"])
    if name == "sph":
        if target == "class":
            raise DSLError("sph() describes radial functions only", text, m.start(1))
        if space is None:
            raise DSLError("sph() needs a space", text, m.start(1))
        if args["l"] < 0 and not space.two_sided:
            raise DSLError(f"degree l={args['l']} must be >= 0", text, where["l"])
        return RadialFunction.poly_spherical(space, args["l"])
    # char
    if target != "class":
        raise DSLError("char() describes class functions only", text, m.start(1))
    if args["n"] < 0:
        raise DSLError(f"label n={args['n']} must be >= 0", text, where["n"])
    return ClassFunction.char(args["n"])
