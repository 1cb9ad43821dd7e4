"""Smoke test for the cycloscope_py extension.

Build with
    cargo build --release -p cycloscope-py --features extension-module
    cp target/release/libcycloscope_py.so python/cycloscope_py.so
then run `python3 python/smoke_test.py`.
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import cycloscope_py as cs


def main():
    m = cs.member(7, 2, witness=True)
    assert m["verdict"] == "member", m
    assert {m["witness"]["g"], m["witness"]["h"]} == {"X^4 + X^3 + X^2 + 1", "X^3 + X^2 + 1"}
    assert cs.member(11, 5)["verdict"] == "nonmember"
    assert cs.brute_force_member(11, 3)

    factors = cs.factor_phi(7, 2)
    assert [str(f) for f in factors] == ["X^3 + X + 1", "X^3 + X^2 + 1"]
    product = factors[0] * factors[1]
    assert product == cs.Poly([1] * 7, 2)
    q, r = divmod(cs.Poly([-1, 0, 0, 0, 0, 0, 0, 1], 2), product)
    assert str(q) == "X + 1" and r.degree is None

    f = cs.Poly([1, 0, 1, 1], 2)
    assert f.reversal().reversal() == f
    assert cs.Poly([1, 0, 1, 1, 1], 3).in_m_ring()
    assert cs.trace_multiset(11, 5) == {1: 1, 3: 1}
    assert cs.multiplicative_order(2, 7) == 3

    artin = cs.constants("artin", precision=1e-8)
    assert float(artin["lo"]) <= 0.3739558137 and 0.3739558136 <= float(artin["hi"])
    assert cs.constants("bound", ell=3, precision=1e-8)["lo"].startswith("0.25208")

    rep = cs.run_survey(3, 20000)
    assert rep["members"] + rep["nonmembers"] + rep["undecided"] == rep["total_primes"]
    assert cs.golomb_survey(2, 2, 20000)["count"] > 0
    assert cs.lemma_checks(2000)["passed"]
    assert cs.davenport(5)["confirmed"]

    for call in (lambda: cs.member(4, 2), lambda: cs.constants("hooley", a=4)):
        try:
            call()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
    try:
        cs.factor_phi(3001, 2)
    except cs.CapacityError:
        pass
    else:
        raise AssertionError("expected CapacityError")
    print("smoke test passed")


if __name__ == "__main__":
    main()
