"""Smoke test for the Python bindings. Run after `pip install --no-build-isolation -e crates/python`."""

from fractions import Fraction

import crossed_kuperberg_py as ck


def main():
    rp3 = ck.HeegaardDiagram.lens(2, 1)
    xm = ck.CrossedModule.z4_to_z2()
    a = ck.HopfChiCoalgebra.kp4()

    assert rp3.is_valid() and rp3.validate() == []
    assert xm.check() == []
    assert a.check_axioms() == []
    assert a.dims == [4, 4]

    ints = a.integrals()
    assert ints["Lambda"] == [1, 1, 1, 1], ints

    labs = ck.labelings(rp3, xm)
    orbits = ck.orbits(rp3, xm)
    assert len(labs) == 6 and len(orbits) == 4
    assert sum(size for _, size in orbits) == len(labs)

    values = {}
    for rep, _ in orbits:
        key = (rep["alpha"]["u"], rep["beta"]["l"])
        values[key] = Fraction(ck.invariant(rp3, rep, a))
    print("RP3 with kp4:", {k: str(v) for k, v in sorted(values.items())})

    # Invariance under a gauge transformation and under a move.
    lab = labs[-1]
    comp = rp3.to_json()["components"][0]
    moved = ck.gauge({"a": {comp: 1}, "d": {"u": 3}}, lab, rp3, xm)
    assert ck.invariant(rp3, moved, a) == ck.invariant(rp3, lab, a)
    d2, lab2 = rp3.apply_move(lab, xm, {"kind": "reverse_upper", "upper": "u"})
    assert d2.is_valid()
    assert ck.invariant(d2, lab2, a) == ck.invariant(rp3, lab, a)

    # Multiplicativity under connected sum.
    l31 = ck.HeegaardDiagram.lens(3, 1)
    s = rp3.connected_sum(l31)
    for l1 in labs:
        for l2 in ck.labelings(l31, xm):
            joint = {
                "alpha": {**l1["alpha"], **{k + "#2": v for k, v in l2["alpha"].items()}},
                "beta": {**l1["beta"], **{k + "#2": v for k, v in l2["beta"].items()}},
            }
            lhs = Fraction(ck.invariant(s, joint, a))
            rhs = Fraction(ck.invariant(rp3, l1, a)) * Fraction(ck.invariant(l31, l2, a))
            assert lhs == rhs, (l1, l2, lhs, rhs)

    # Kuperberg specialization: counts of p-th roots of unity.
    z3 = ck.HopfChiCoalgebra.group_algebra(3)
    assert ck.kuperberg(ck.HeegaardDiagram.lens(3, 1), z3) == "3"
    assert ck.kuperberg(ck.HeegaardDiagram.poincare(), z3) == "1"

    # JSON round trips.
    assert ck.HeegaardDiagram.from_json(rp3.to_json()).to_json() == rp3.to_json()
    assert ck.HopfChiCoalgebra.from_json(a.to_json()).to_json() == a.to_json()
    assert ck.CrossedModule.from_json(xm.to_json()).to_json() == xm.to_json()

    # Errors surface as ValueError.
    try:
        ck.HeegaardDiagram.lens(4, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("lens(4, 2) should be rejected")

    print("smoke test passed")


if __name__ == "__main__":
    main()
