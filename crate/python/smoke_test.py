"""Smoke test for the `vsr` extension module.

Build and install first, e.g. `maturin build --release -m crates/py/Cargo.toml`
followed by `pip install target/wheels/vsr-*.whl`.
"""

import math

import vsr


def main():
    inst = vsr.Instance.shortest_path(2, [(0, 1), (0, 1)], [4.0, 5.0], 0, 1)
    assert inst.kind == "shortest_path" and inst.dimension == 2

    r, y = vsr.regret(inst, "10", 1.0)
    assert (r, y) == (8.0, "01")

    ev = vsr.evaluate(inst, [1, 0])
    assert math.isclose(ev["val"], 32 / 9, abs_tol=1e-12)
    assert len(ev["changepoints"]) == 1 and math.isclose(ev["changepoints"][0], 1 / 9, abs_tol=1e-12)

    for backend in ("enum", "highs"):
        res = vsr.compromise(inst, backend=backend)
        assert res["x"] == "10" and math.isclose(res["val"], 32 / 9, abs_tol=1e-9), res

    x, reg = vsr.minmax_regret(inst, 0.0, backend="enum")
    assert (x, reg) == ("10", 0.0)
    x, value = vsr.interval_minmax(inst)
    assert x == "10" and math.isclose(value, 6.0)

    layered = vsr.Instance.layered(5, 5, seed=3)
    assert layered.dimension == 135
    res = vsr.compromise(layered)
    x = res["x"]
    r1, _ = vsr.regret(layered, x, 1.0)
    nominal_cost = sum(c for c, bit in zip(layered.nominal, x) if bit == "1")
    assert math.isclose(r1, 2 * nominal_cost, abs_tol=1e-9)
    lbs = [it[1] for it in res["iterations"]]
    assert all(b >= a - 1e-6 * (1 + abs(a)) for a, b in zip(lbs, lbs[1:]))

    sel = vsr.Instance.selection(1, [2.0, 5.0, 9.0])
    assert math.isclose(vsr.evaluate(sel, "100")["val"], 8 / 7, abs_tol=1e-12)

    again = vsr.Instance.from_json(layered.to_json())
    assert again.nominal == layered.nominal

    lp = vsr.master_lp(inst, [0.5])
    assert lp.startswith("Minimize") and "Binary" in lp

    try:
        vsr.regret(inst, "11", 0.5)
    except ValueError as e:
        assert "infeasible" in str(e)
    else:
        raise AssertionError("infeasible solution accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
