"""Smoke test for the strongblock Python module.

Build the extension first:

    cargo build --release -p strongblock-python --features extension-module

then run `python3 python/smoke_test.py`. The script copies the built library
next to a temporary `strongblock.so` and imports it from there; set
STRONGBLOCK_LIB to point at a different build.
"""

import importlib
import os
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load():
    lib = Path(os.environ.get("STRONGBLOCK_LIB", ROOT / "target" / "release" / "libstrongblock_py.so"))
    if not lib.exists():
        sys.exit(f"{lib} not found; build with cargo build --release -p strongblock-python --features extension-module")
    tmp = tempfile.mkdtemp()
    shutil.copy(lib, Path(tmp) / "strongblock.so")
    sys.path.insert(0, tmp)
    return importlib.import_module("strongblock")


def main():
    sb = load()
    print("strongblock", sb.__version__)

    pg32 = sb.Geometry(4, 2)
    assert pg32.num_points == 15
    assert len(pg32.lines()) == 35 and len(pg32.hyperplanes()) == 15
    assert all(len(line) == 3 for line in pg32.lines())

    quadric = sb.hyperbolic_quadric(pg32)
    assert len(quadric) == 9 and quadric.is_strong()
    report = quadric.verify(total=True)
    assert report["failing_hyperplanes"] == []
    assert report["intersection_profile"] == {3: 6, 5: 9}
    assert sb.PointSet.from_text(quadric.to_text()) == quadric

    plane = sb.PointSet.from_indices(pg32, pg32.hyperplanes()[0])
    assert not plane.is_strong()
    assert len(plane.verify(total=True)["failing_hyperplanes"]) == 14

    code = quadric.to_code()
    assert (code.n, code.k, code.q) == (9, 4, 2)
    assert code.is_minimal()
    assert code.to_pointset() == quadric

    bad = sb.LinearCode([[1, 1, 1], [0, 0, 1]], 2)
    rep = bad.minimality_report()
    assert not rep["minimal"]
    assert ([1, 1, 1], [1, 1, 0]) in [tuple(w) for w in rep["witnesses"]]
    try:
        sb.LinearCode([[1, 1, 0], [1, 1, 0]], 2)
    except ValueError as e:
        assert "rank" in str(e)
    else:
        raise AssertionError("rank-deficient generator accepted")

    orbits = sb.classify(pg32, 9, workers=1)
    assert sorted(o["orbit_size"] for o in orbits) == [105, 280, 420, 1680, 2520]
    assert [o["is_strong"] for o in orbits].count(True) == 1

    found = sb.search(pg32, 9)
    assert found["exhausted"] and len(found["found"]) == 280
    assert sb.search(pg32, 8)["found"] == []

    pg42 = sb.Geometry(5, 2)
    assert len(sb.parabolic_quadric(pg42)) == 15 and sb.parabolic_quadric(pg42).is_strong()
    r = sb.search(pg42, 12)
    assert r["exhausted"] and r["found"] == []

    pg52 = sb.Geometry(6, 2)
    r = sb.search(pg52, 15, mode="line-union", budget=5000, seed=1, workers=1)
    assert not r["exhausted"]
    assert all(s.is_strong() and len(s) == 15 for s in r["found"])

    fano = sb.Geometry(3, 3)
    pts = sb.PointSet(fano, [[2, 0, 0], [0, 1, 1]])
    assert pts.coords() == [[0, 1, 1], [1, 0, 0]]
    assert sb.lower_bound(4, 2) == 9

    print("python smoke test passed")


if __name__ == "__main__":
    main()
