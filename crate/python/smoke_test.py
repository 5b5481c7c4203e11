"""Smoke test for the Python bindings.

Build and install first:

    pip install -e crates/py --no-build-isolation
    python python/smoke_test.py
"""

import json

import gridramsey_py as gr


def main():
    r = json.loads(gr.arrows("complete:6", "cycle:4"))
    assert r["outcome"] == "yes", r
    r = json.loads(gr.arrows("complete:5", "cycle:4"))
    assert len(r["outcome"]["no"]["witness"]) == 10, r

    n, edges = gr.host_edges("gnp:500,0.1", seed=3)
    assert n == 500
    assert all(u < v for u, v in edges)
    assert gr.host_edges("gnp:500,0.1", seed=3) == (n, edges)
    assert len(gr.grid_edges(3, 4)) == 17

    chain = json.loads(gr.constants(0.5, 0.01))
    assert chain["alpha"] == 0.025, chain
    assert gr.first_moment_threshold(1e6, 0.5e-3) == 11
    assert gr.first_moment_threshold(1e6, 0.1) is None

    ws = json.loads(gr.witness_size([100, 1000]))
    assert ws[0]["C"] == 448.0 and ws[1]["N"] > ws[0]["N"], ws

    props = json.loads(gr.verify_props("gnp:300,0.3", seed=1, properties="i,v"))
    assert [p["property"] for p in props] == ["i_degrees", "i_codegrees", "v"]

    config = {
        "host": "grid:5,5",
        "strategy": "all-red",
        "preset": "paper",
        "alpha_prime": 1.0,
        "overrides": {"alpha": 0.15, "eps_prime": 0.15, "delta": 0.5, "c": 0.5},
        "mode": "fixed:5",
        "pair": {"kind": "bipartition"},
        "seeds": [1],
    }
    report = json.loads(gr.experiment(json.dumps(config)))
    assert report["successes"] == 1 and report["median_s"] == 5.0, report
    assert gr.experiment(json.dumps(config)) == gr.experiment(json.dumps(config))

    try:
        gr.arrows("complete:5", "wheel:3")
    except ValueError:
        pass
    else:
        raise AssertionError("bad pattern accepted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
