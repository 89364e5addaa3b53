import itertools
import random

import pytest

import dclust


def plane(n, seed):
    rng = random.Random(seed)
    return [[rng.random(), rng.random()] for _ in range(n)]


def brute_kmedian(points, k):
    def d(a, b):
        return ((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2) ** 0.5

    return min(
        sum(min(d(p, points[c]) for c in subset) for p in points)
        for subset in itertools.combinations(range(len(points)), k)
    )


def test_instance_round_trip():
    inst = dclust.points_instance(plane(6, 1), "kmedian", k=2)
    assert inst["schema"] == "dclust.instance/1"
    assert inst["k"] == 2
    again = dclust.parse_instance("0,0\n1,0\n0,1\n", objective="kmedian", k=1)
    assert again["k"] == 1


def test_exact_and_evaluate_match_brute_force():
    pts = plane(8, 2)
    inst = dclust.points_instance(pts, "kmedian", k=2)
    opt = dclust.exact(inst)
    assert opt["cost"] == pytest.approx(brute_kmedian(pts, 2), rel=1e-12)
    assert dclust.evaluate(inst, opt["facilities"])["cost"] == pytest.approx(opt["cost"])


@pytest.mark.parametrize("objective", ["fl", "kmedian", "kmeans", "kcenter"])
def test_solve_is_feasible_and_above_optimum(objective):
    inst = dclust.points_instance(plane(9, 3), objective, k=2, opening_cost=0.3)
    res = dclust.solve(inst, epsilon=0.3, seed=5)
    opt = dclust.exact(inst)
    assert res["cost"] >= opt["cost"] * (1 - 1e-9)
    assert res["cost"] <= res["guide"]["cost"] * 10
    if objective != "fl":
        assert len(res["facilities"]) <= (2 if objective != "kcenter" else 5)
    assert dclust.solve(inst, epsilon=0.3, seed=5) == res


def test_decomposition():
    inst = dclust.points_instance(plane(12, 4), "kmedian", k=1)
    dec = dclust.decompose(inst, 0.25, seed=3)
    assert dec["seed"] == 3
    assert len(dec["parts"]) > 0


def test_errors():
    inst = dclust.points_instance(plane(5, 5), "kmedian", k=1)
    with pytest.raises(dclust.ParameterError):
        dclust.solve(inst, epsilon=1.5)
    with pytest.raises(dclust.ParseError):
        dclust.parse_instance("0,0\n1,x\n")
    with pytest.raises(ValueError):
        dclust.parse_instance("0\n1,0\n5,1,0\n", format="distmatrix-csv", k=1)
    with pytest.raises(ValueError):
        dclust.points_instance([[0, 0], [1]], "kmedian")
