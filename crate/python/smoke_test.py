#!/usr/bin/env python3
"""Smoke test for the spingeo extension module.

Builds nothing itself: run `cargo build --release -p spingeo-py` first.
The script locates the compiled cdylib, exposes it under the importable
module name, and exercises the main types and entry points.
"""

import json
import shutil
import sys
import tempfile
from pathlib import Path


def locate_extension() -> Path:
    root = Path(__file__).resolve().parents[1]
    candidates = []
    for profile in ("release", "debug"):
        base = root / "target" / profile
        candidates += [base / "libspingeo.so", base / "libspingeo.dylib", base / "spingeo.dll"]
    for c in candidates:
        if c.exists():
            return c
    sys.exit(
        "compiled extension not found; run `cargo build --release -p spingeo-py` first"
    )


def import_spingeo():
    lib = locate_extension()
    tmp = Path(tempfile.mkdtemp(prefix="spingeo-"))
    suffix = ".pyd" if lib.suffix == ".dll" else ".so"
    shutil.copy2(lib, tmp / f"spingeo{suffix}")
    sys.path.insert(0, str(tmp))
    import spingeo  # noqa: E402

    return spingeo


def main() -> None:
    sg = import_spingeo()
    failures = 0

    def check(name: str, ok: bool) -> None:
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        if not ok:
            failures += 1

    # Exact scalar arithmetic.
    c = sg.Scalar("1/sqrt5")
    check("scalar parse/round-trip", str(c) == "1/sqrt5")
    check("radical squares to rational", str(c * c) == "1/5")
    gamma = sg.Scalar("-7/sqrt5")
    check("gamma squared", (gamma * gamma) == sg.Scalar("49/5"))
    check("to_float", abs(sg.Scalar("49/20").to_float() - 2.45) < 1e-15)

    # Multivector algebra.
    e1 = sg.Multivector.blade(7, [1], sg.Scalar("1"))
    sq = e1.geometric(e1)
    check("frame vector squares to -1", str(sq) == "-1")
    torsion = sg.catalog_torsion("b7")
    check("derived torsion coefficients", str(torsion).startswith("-1/sqrt5*e124"))
    check("torsion norm", torsion.norm_sq() == sg.Scalar("7/5"))
    sigma = torsion.sigma()
    check("sigma is a 4-form", sigma.grades() == [4])
    check("wedge with self vanishes", e1.wedge(e1).is_zero())

    # Torsion spectrum of the constructed spaces.
    spectrum = sg.torsion_spectrum("b7")
    check("berger spectrum", spectrum == [("-7/sqrt5", 1), ("1/sqrt5", 7)])
    check("sphere spectrum", sg.torsion_spectrum("s3") == [("2", 2)])

    # Full verification reports.
    for target in sg.catalog_targets():
        report = json.loads(sg.verify(target))
        check(
            f"verify {target}",
            report["summary"]["fail"] == 0 and report["summary"]["pass"] > 0,
        )

    # Seeded fuzzing is reproducible.
    a = sg.fuzz(dim=5, trials=10, seed=7)
    b = sg.fuzz(dim=5, trials=10, seed=7)
    check("fuzz deterministic", a == b)
    check("fuzz green", json.loads(a)["summary"]["fail"] == 0)

    # Estimates.
    est = json.loads(sg.estimates(7, "189/10", "7/5", "-7/sqrt5"))
    values = {v["name"]: v["exact"] for v in est["values"]}
    check("universal estimate", values["beta_univ"] == "49/20")
    check("twistorial estimate", values["beta_tw"] == "49/20")
    check("killing flag", values["killing_flag"] == "true")

    # User-defined space through the JSON schema.
    space = {
        "name": "small-sphere",
        "field": {"radicals": []},
        "dim_k": 0,
        "dim_m": 3,
        "brackets": [[0, 1, [[2, "1"]]], [1, 2, [[0, "1"]]], [2, 0, [[1, "1"]]]],
        "torsion": "canonical",
    }
    summary = json.loads(sg.load_space_summary(json.dumps(space)))
    check("user space scalar curvature", summary["sca_g"] == "3/2")

    print(f"\n{'OK' if failures == 0 else 'FAILED'}: smoke test, {failures} failures")
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()
