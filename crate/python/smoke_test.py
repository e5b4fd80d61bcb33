"""Smoke test for the nefcert Python module.

Install first with:  pip install -e crates/py --no-build-isolation
"""

import json

import nefcert


def main() -> None:
    c = nefcert.Curve(3, [1, 0, 0, 0, 0, 1])
    assert c.genus == 2
    assert not c.is_ordinary()
    assert c.cartier_manin() == [[0, 0], [1, 0]]
    assert c.point_count(1) == 4
    assert c.jacobian_order() == 10

    d = nefcert.Curve(3, [1, 0, 0, 0, 1, 0])
    assert d.is_ordinary() and d.p_rank() == 2
    assert d.h0_infinity(2) == 2 and d.h1_infinity(0) == 2
    assert d.riemann_roch_check(20, 1) == 20

    lat = nefcert.SurfaceLattice("p1xp1", 12)
    assert lat.rank == 14 and lat.signature() == (1, 13)
    cls = [2, 3] + [-1] * 12
    assert lat.intersect(cls, cls) == 0

    l, curves = nefcert.ruling_example(3)
    rep = nefcert.SurfaceLattice("p1xp1", 3).exceptional_curves(l, curves)
    assert len(rep["negative"]) == 6 and rep["picard_number"] == 5
    assert nefcert.rankin_extremal(2, False) == 4

    text = nefcert.search(3, 1)
    cert = json.loads(text)
    assert cert["schema"] == nefcert.SCHEMA_VERSION
    valid, checks = nefcert.verify(text)
    assert valid and len(checks) == 7
    cert["gamma"] = [0, 0]
    valid, checks = nefcert.verify(json.dumps(cert))
    assert not valid and not checks[2][2]
    print("smoke test passed: certificate over F_%d verified" % cert["q"])


if __name__ == "__main__":
    main()
