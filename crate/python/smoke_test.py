"""Smoke test for the pyontotest extension module.

Build and install it first:
    pip install -e crates/py --no-build-isolation
"""

import json

import pyontotest

TOY = """
fof(phi1, axiom, ![X,Y]: ((p(X) & q(X,Y)) => r(X))).
fof(phi2, axiom, ![X]: (p(X) => ~r(X))).
fof(phi3, axiom, ![X]: ((?[Y]: q(X,Y)) => ~r(X))).
"""


def main():
    assert pyontotest.normalize("p => q") == "~ p | q"
    assert pyontotest.canonical_form("![X]: ?[Y]: q(X,Y)") == "![V1] : ?[V2] : q(V1,V2)"

    suites = json.loads(pyontotest.generate(TOY, "toy"))
    assert suites["raw_falsity"] == 18
    assert len(suites["falsity"]) == len(suites["truth"]) == 9

    verdict = json.loads(pyontotest.entails(TOY, "![X,Y]: (~p(X) | ~q(X,Y))", 5.0))
    assert verdict["status"] == "proved", verdict
    assert verdict["used_axioms"] == [1, 2], verdict

    assert pyontotest.check_equiv("p => q", "~p | q") is None
    assert pyontotest.check_equiv("p(a)", "q(a)") is not None

    report = json.loads(pyontotest.run_campaign(TOY, "toy", 2.0))
    grades = {a["name"]: a["grade"] for a in report["axioms"]}
    assert grades["phi1"] == "defective", grades
    assert report["grades"]["defective"] == 1

    try:
        pyontotest.generate("fof(broken", "bad")
    except ValueError:
        pass
    else:
        raise AssertionError("parse error not raised")

    print("pyontotest smoke test: ok")


if __name__ == "__main__":
    main()
