"""Build the extension module with cargo, import it and exercise its API.

Usage: python3 python/smoke_test.py
"""

import importlib
import math
import pathlib
import shutil
import subprocess
import sys
import sysconfig
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def build() -> pathlib.Path:
    subprocess.run(
        ["cargo", "build", "--release", "-p", "oneshot-python", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    libs = list((ROOT / "target" / "release").glob("liboneshot_py.*"))
    libs = [p for p in libs if p.suffix in (".so", ".dylib", ".dll")]
    if not libs:
        sys.exit("extension library not found after build")
    return libs[0]


def main() -> None:
    lib = build()
    dest = pathlib.Path(tempfile.mkdtemp())
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    shutil.copy(lib, dest / f"oneshot_py{suffix}")
    sys.path.insert(0, str(dest))
    op = importlib.import_module("oneshot_py")

    assert op.sample("Halton", 3, 2, seed=0) == [[0.5, 1 / 3], [0.25, 2 / 3], [0.75, 1 / 9]]
    assert op.canonical_name("Cchy Rctg.55 Scr Hmsley") == "CauchyRctg0.55ScrHammersley"

    sampler = op.Sampler("MetaRctgScrHammersley")
    pts = sampler.unbounded(100, 25, seed=1)
    assert len(pts) == 100 and all(len(p) == 25 for p in pts)
    cube = op.Sampler("RandomPlusMiddlePoint").cube(5, 3, seed=2)
    assert cube[0] == [0.5, 0.5, 0.5]

    assert abs(op.normal_inv_cdf(0.975) - 1.959963984540054) < 1e-12
    assert abs(op.cauchy_inv_cdf(0.99) - 31.820515953773958) < 1e-9
    assert abs(op.meta_lambda(100, 25) - 0.4353360063382997) < 1e-12
    assert abs(op.normal_cdf(op.normal_inv_cdf(0.3)) - 0.3) < 1e-12

    assert op.star_discrepancy([[0.5]]) == 0.5
    assert op.min_distance([3.0, 4.0], [[0.0, 0.0]]) == 5.0
    halton = op.sample("Halton", 256, 2, seed=0)
    assert op.star_discrepancy(halton, boxes=100_000, seed=3) <= op.star_discrepancy(halton)

    lines = op.check_bounds(seed=1, replicas=500)
    assert len(lines) == 3 and all("pass=" in line for line in lines)

    csv, table = op.bench(
        ["Random", "RandomPlusMiddlePoint"], [(20, 20)], [10], replicas=30, seed=4, functions=["Sphere"]
    )
    assert csv.count("\n") == 1 + 2 * 30
    assert "RandomPlusMiddlePoint" in table

    try:
        op.Sampler("Hallton")
    except ValueError as e:
        assert "nearest valid name: Halton" in str(e)
    else:
        raise AssertionError("bad name accepted")

    assert not math.isnan(pts[0][0])
    print("python smoke test passed")


if __name__ == "__main__":
    main()
