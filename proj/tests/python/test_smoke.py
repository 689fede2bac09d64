"""Smoke tests for the python binding (plain asserts; no test framework)."""

import json
import math
import sys


def main() -> int:
    import anelastic as an

    # Mode bookkeeping.
    assert an.mode_count(4) == 45
    assert an.real_dimension(4) == 134

    # Density profile.
    q = an.make_q_eps(0.1)
    assert math.isclose(q.value(0.0), 0.05, rel_tol=1e-14)
    assert math.isclose(q.value(0.5), 0.75, rel_tol=1e-14)
    props = an.verify_profile(0.125)
    assert props["all_ok"], props

    # Config validation surfaces as ValueError.
    try:
        an.run_json(json.dumps({"m": 0}))
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError for invalid config")

    # Hardy anchor: k=0, f=z has ratio exactly 5/8.
    lhs, rhs, ratio = an.hardy_ratio(0.0, 0.0, "z")
    assert math.isclose(ratio, 0.625, rel_tol=1e-8), ratio

    # Constant-density pressure operator is diagonal with -pi^2 (k1^2+k2^2).
    mat = an.pressure_matrix_constant(3)
    assert mat.shape == (27, 27)
    off = max(
        abs(mat[i][j])
        for i in range(mat.shape[0])
        for j in range(mat.shape[1])
        if i != j
    )
    assert off < 1e-10, off

    # Short closed-form decay validation.
    tg = an.taylor_green(m=4, dt=1e-3, t_end=0.01, amplitude=1.0)
    assert tg["max_rel_error"] < 1e-6, tg

    # A tiny full run end to end.
    cfg = {
        "m": 4,
        "dt": 1e-3,
        "t_end": 0.01,
        "scheme": "rk4",
        "cadence": 5,
        "density": {"kind": "regularized", "alpha": 2.0, "epsilon": 0.25},
        "initial": {"type": "stream_bump", "amplitude": 0.05, "delta": 0.2},
    }
    out = an.run_json(json.dumps(cfg))
    assert out["steps"] == 10
    assert out["max_constraint_ratio"] < 1e-9, out["max_constraint_ratio"]
    assert len(out["records"]) == 3

    print("python smoke: OK")
    return 0


if __name__ == "__main__":
    sys.exit(main())
