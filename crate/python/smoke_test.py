"""Smoke test for the Python bindings.

Builds the extension with cargo unless WANDSET_PY_LIB points at a built
library, then imports it from a temporary directory.

    python3 python/smoke_test.py
"""

import importlib.util
import json
import os
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    lib = os.environ.get("WANDSET_PY_LIB")
    if lib is None:
        subprocess.run(
            ["cargo", "build", "-p", "wandset-py", "--features", "extension-module"],
            cwd=ROOT,
            check=True,
        )
        lib = ROOT / "target" / "debug" / "libwandset_py.so"
    tmp = Path(tempfile.mkdtemp())
    dest = tmp / "wandset.so"
    shutil.copy(lib, dest)
    spec = importlib.util.spec_from_file_location("wandset", dest)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


ws = load_module()


def test_pure_stage_counts():
    u = ws.build("pure", 4)
    assert u.stage_counts() == [0, 1, 2, 4, 16]
    assert len(u) == 16


def test_church_tap_and_decompose():
    u = ws.build("church:2", 3)
    assert len(u) == 11
    empty = u.resolve("{}")
    c = u.tap(0, empty)
    assert u.render(c) == "*0({})"
    assert not u.is_bland(c)
    assert u.decompose(c) == (empty, [0])
    assert u.tap(1, empty) is None


def test_eval_and_verify():
    ext = "forall a. forall b. ((forall x. (In(x, a) <-> In(x, b))) -> a = b)"
    # taps have no members, so unguarded extensionality fails once one exists
    assert ws.build("church:2", 3).eval(ext) is False
    u = ws.build("conway", 3)
    assert u.eval(ext) is True
    assert u.eval("exists y. In(x, y)", [("x", 0)])
    report = json.loads(u.verify("core"))
    assert all(c["passed"] for c in report["checks"])
    try:
        u.eval("forall x In(x")
    except ValueError:
        pass
    else:
        raise AssertionError("parse error not raised")


def test_export_round_trip():
    u = ws.build("church:2", 3)
    text = u.export()
    assert ws.load(text).export() == text


def test_unknown_spec():
    try:
        ws.build("nope", 2)
    except KeyError:
        return
    raise AssertionError("unknown spec accepted")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print("ok", name)
    print("specs:", ", ".join(ws.shipped_specs()))
