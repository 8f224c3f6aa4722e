"""Smoke test for the dspectra extension module.

Build first, e.g. `maturin develop -m crates/python/Cargo.toml`, then run
`python python/smoke_test.py`.
"""

import cmath
import math

import dspectra


def main():
    P = dspectra.Permutation
    sigma = P.parse("(145)(23)", 5)
    tau = P.parse("(1425)", 5)
    assert str(sigma) == "(145)(23)"
    assert sigma.compose(sigma.inverse()) == P.identity(5)
    assert sorted(sigma.cycle_type()) == [2, 3]

    census = dspectra.PairCensus(5)
    assert len(census) == 98, len(census)
    idx = census.classify(sigma, tau)
    assert census.classify(tau, sigma) == idx

    region = dspectra.Region(5)
    assert math.isclose(region.inradius, math.cos(math.pi / 5))
    assert region.contains(0.5 + 0.1j)
    assert not region.contains(1.1 + 0j)
    assert len(region.polygon(5)) == 5

    eig = dspectra.deflated_eigenvalues([P.parse("(123)", 3)], [1.0])
    assert all(abs(z**3 - 1) < 1e-12 for z in eig), eig

    reports = census.scan(mesh=15)
    assert [r["classIndex"] for r in reports] == [idx], reports
    assert reports[0]["maxViolation"] > 0

    lo, hi = dspectra.refine(sigma, tau)
    assert abs(lo - 0.4705275) < 1e-5 and abs(hi - 0.5490013) < 1e-5, (lo, hi)
    try:
        dspectra.refine(P.parse("(12)(345)", 5), tau)
    except dspectra.NoCrossingError:
        pass
    else:
        raise AssertionError("expected NoCrossingError")

    pts = dspectra.scan_pair(sigma, tau, mesh=5)
    assert len(pts) == 5 * 4
    assert all(abs(cmath.polar(z)[0]) <= 1 + 1e-9 for _, z in pts)

    assert dspectra.scan_tuples(4, 3, mesh=10, samples=200, seed=1) == []

    hull = dspectra.hull_scan("alternating", 4, k=3, mesh=12)
    assert hull["maxEnvelopeExcess"] > 0

    print("smoke test ok")


if __name__ == "__main__":
    main()
