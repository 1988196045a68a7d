"""Smoke test for the groupfb Python extension."""

import random

import groupfb


def close(a, b, tol):
    return max(abs(x - y) for x, y in zip(a, b)) <= tol


def main():
    rng = random.Random(3)

    def rand_signal(n):
        return [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(n)]

    g = groupfb.Group.dihedral(4)
    assert (g.order, g.order_n, g.order_h) == (8, 4, 2)
    assert g.verify_axioms()["order_g"] == 8
    assert g.mul((1, 1), (1, 0)) == (0, 1)
    assert g.inv((3, 0)) == (1, 0)

    same = groupfb.Group.from_json('{"moduli": [4], "H_cyclic": 2, "action": {"1": [[-1]]}}')
    assert same.order == 8

    deltas = g.delta_bank()
    pr = groupfb.verify_pr(g, deltas, deltas)
    assert pr["pr"] and pr["max_dev"] == 0.0

    analysis = [rand_signal(8) for _ in range(3)]
    dual = groupfb.design_dual(g, analysis)
    assert groupfb.verify_pr(g, analysis, dual)["pr"]

    alpha = rand_signal(8)
    coeffs, out = groupfb.run_filterbank(g, alpha, analysis, dual)
    assert len(coeffs) == 3 and close(out, alpha, 1e-10)
    _, out_poly = groupfb.run_filterbank(g, alpha, analysis, dual, polyphase=True)
    assert close(out, out_poly, 1e-11)

    u = [[rand_signal(3) for _ in range(2)] for _ in range(4)]
    other = groupfb.dual_family(g, analysis, u)
    assert groupfb.verify_pr(g, analysis, other)["pr"]

    e0, e1 = g.index((0, 0)), g.index((0, 1))
    hadamard = [[0.0] * 8 for _ in range(2)]
    hadamard[0][e0] = hadamard[0][e1] = hadamard[1][e0] = 1.0
    hadamard[1][e1] = -1.0
    assert abs(groupfb.frame_bounds(g, hadamard)["tight"] - 2.0) < 1e-12
    report = groupfb.classify_pair(g, deltas, deltas)
    assert report["classification"]["onb"]

    try:
        groupfb.design_dual(g, analysis[:1])
    except groupfb.SamplesInsufficient as e:
        assert "samples insufficient" in str(e)
    else:
        raise AssertionError("K < L was accepted")

    try:
        groupfb.Group.from_json('{"moduli": [4], "H_cyclic": 2, "action": {"1": [[2]]}}')
    except ValueError:
        pass
    else:
        raise AssertionError("non-automorphism was accepted")

    crystal = groupfb.Crystal.dihedral(8)
    assert crystal.dim == 16 and crystal.group.order == 8
    for mode in ("average", "pointwise"):
        demo = crystal.demo(mode=mode, k=2, trials=100, seed=7)
        assert demo["errors"]["max"] <= 1e-9, demo["errors"]["max"]
        assert demo["interpolation_deviation"] <= 1e-10

    s = crystal.sampler(k=2)
    lo, hi = s.riesz_bounds
    assert 0 < lo <= hi
    x = s.synthesize(rand_signal(8))
    xr = s.reconstruct(s.samples(x))
    norm = sum(abs(v) ** 2 for v in x) ** 0.5
    assert close(x, xr, 1e-9 * norm)
    assert s.interpolation_deviation() <= 1e-10

    rot = groupfb.Crystal.square_rotations(8)
    demo = rot.demo(mode="pointwise", trials=20)
    assert demo["errors"]["max"] <= 1e-9

    print("groupfb smoke test ok")


if __name__ == "__main__":
    main()
