"""Smoke test for the ordinal_ramsey extension module.

Build and install first:

    cd crates/python && maturin build --release -o dist && pip install dist/*.whl
"""

import ordinal_ramsey as orr


def check_orders():
    assert "omega-star" in orr.orders_list()
    ws = orr.Order("omega-star")
    assert ws.compare(3, 5) == 1
    assert ws.descending_witness(3) == [0, 1, 2]
    eta = orr.Order("eta")
    assert eta.compare("1/2", "1/3") == 1
    om = orr.Order("omega")
    # ω^2 + ω against ω^2 + 1
    assert om.compare_omega([2, 1], [2, 0]) == 1
    assert om.delta_omega([2, 1], [2, 0]) == 1
    assert om.delta_omega([2], [2]) is None
    # ε_0 below ω^{ε_0 + 1}
    assert om.compare_epsilon([{"eps": 0}], [{"w": [{"eps": 0}, {"w": []}]}]) == -1


def check_errors():
    try:
        orr.Order("omega").compare_omega([0, 1], [1])
    except orr.OrdinalError as e:
        assert str(e).startswith("Parse"), e
    else:
        raise AssertionError("non-normal term accepted")
    try:
        orr.run_pipeline("rt3", bogus=1)
    except orr.OrdinalError as e:
        assert "bogus" in str(e)
    else:
        raise AssertionError("unknown option accepted")


def check_pipelines():
    assert orr.gen("rt3", count=3) == [[0, 1], [0, 2], [0, 3]]
    assert orr.color("rt3", [0, 1, 2]) == "C1g"
    assert orr.config("large")["kind"] == "pure-epsilon"
    for pipeline in ["rt3", "rtn", "large", "hindman"]:
        trace = orr.run_pipeline(pipeline)
        assert trace["verdicts"]["verified"], (pipeline, trace["verdicts"])
        report = orr.verify_trace(trace)
        assert report["exit_code"] == 0 and not report["mismatches"], report
        print(f"{pipeline}: extracted {trace['extracted']}")
    bad = orr.run_pipeline("rt3", kind="staircase", size=3)
    assert bad["verdicts"]["error"]["kind"] == "ColourMismatch"
    trace = orr.run_pipeline("rt3")
    trace["extracted"] = trace["extracted"][::-1]
    assert orr.verify_trace(trace)["mismatches"]


if __name__ == "__main__":
    check_orders()
    check_errors()
    check_pipelines()
    print("smoke test ok")
