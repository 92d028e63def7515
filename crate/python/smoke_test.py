"""Smoke test for the upv extension module.

Build and install first:
    maturin build --release -m crates/py/Cargo.toml && pip install target/wheels/upv-*.whl
"""

import json
import sys

import upv


def main() -> int:
    ids = [c[0] for c in upv.list_checks()]
    assert "cover.free_action" in ids and len(ids) == len(set(ids))

    fam = upv.Family(["3", "5", "7", "11", "13"])
    assert not fam.degenerate()
    assert len(fam.t_ideal()) == 65
    assert fam.hilbert(13, 4) == [1, 7, 32, 80, 152]

    e = upv.eps(13)
    assert e * e % 13 == 12

    pts = fam.cover_points(17)
    assert pts and all(len(p) == 8 for p in pts)

    assert upv.intersection_number([[1, 1, 1, 1]] * 4) == 24

    reports = upv.run("invariants.intersection")
    assert len(reports) == 1 and reports[0].passed()
    again = upv.Report.from_json(reports[0].to_json())
    assert again.id == reports[0].id and json.loads(again.witness) == json.loads(reports[0].witness)

    cubic = upv.run("bicanon.plane_sections", nu=["3", "5", "7", "11", "13"])
    assert all(r.passed() for r in cubic)

    try:
        upv.run("all", primes=[7])
    except ValueError as err:
        assert "1 mod 4" in str(err)
    else:
        raise AssertionError("prime 7 accepted")

    header = upv.dump("points", primes=[13], seed=42).splitlines()[0].split()
    assert header[0] == "13"

    print("python smoke test: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
