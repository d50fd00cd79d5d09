# SPDX-License-Identifier: Apache-2.0
"""Smoke test for the pyextlip extension. Run after installing the wheel."""

import json
import math

import pyextlip as ex


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    m3 = ex.MetricSpace([[0, 1, 2], [1, 0, 1.5], [2, 1.5, 0]], labels=["0", "a", "b"])
    assert m3.labels == ["0", "a", "b"] and len(m3) == 3
    assert m3.matrix() == ex.MetricSpace.named("m3").matrix()

    swap = ex.PointMap(m3, m3, ["0", "b", "a"])
    assert swap.lip_at("0") == 2.0
    assert swap.e_constant() == 2.0
    assert swap.lip_const() == 2.0
    assert swap.omega(1.0) == 2.0
    assert close(swap.de(ex.PointMap.identity(m3)), 1.5)
    closed, oracle = swap.adjoint_norm()
    assert closed == 2.0 and oracle == 2.0
    assert swap.then(swap).table == ["0", "a", "b"]
    assert swap.dilate(["a", "b", "a"]) == ["b", "a", "b"]

    assert m3.dual_distance("a", "b") == 3.0
    assert m3.dual_distance("a", "b", oracle=True) == 3.0
    value, vertex = m3.dp(1.0, ["a"], ["b"])
    assert value == 3.0 and dict(vertex)["a"] == 1.0
    assert m3.dp(math.inf, ["a", "b"], ["b"])[0] == 3.0

    h = ex.VectorMap(m3, [[-1.0], [3.0], [4.0]])
    g = h.phi("a")
    assert [v[0] for v in g.values] == [2.0, 3.0, 9.0]
    assert all(close(x[0], y[0]) for x, y in zip(g.phi_inv("a").values, h.values))
    assert h.norm_lx("0") == 4.0

    t = ex.VectorMap(m3, [[0, 0], [1, 0], [0, 2]], norm="two")
    for q in ("one", "two", "sup"):
        te, op = t.lambda_norm(q)
        assert close(te, 1.0) and close(op, 1.0), (q, te, op)

    plane = ex.MetricSpace.from_coords([[0, 0], [-1, 0], [1, 0]])
    assert close(plane.d("p1", "p2"), 2.0)

    report = json.loads(ex.run_suite(seed=0, only=["transfer.phi-isometry"]))
    assert report["summary"]["failed"] == 0 and report["summary"]["checks"] > 0
    bad = json.loads(ex.run_suite(config=json.dumps({"mutation": "corrupted-phi", "only": ["transfer.phi-isometry"]})))
    assert bad["summary"]["failed"] > 0
    corpus = json.loads(ex.run_corpus(["m3", "plane4"]))
    assert corpus["summary"]["failed"] == 0

    try:
        ex.MetricSpace([[0, 1, 5], [1, 0, 3], [5, 3, 0]], labels=["0", "a", "b"])
    except ValueError as e:
        assert "triangle" in str(e), e
    else:
        raise AssertionError("invalid space accepted")

    print("pyextlip smoke test: ok")


if __name__ == "__main__":
    main()
