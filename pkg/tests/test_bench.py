import math

from drupforge.bench import COLUMNS, run_bench, run_workload, summarize, to_csv


def test_rows_per_bound_and_validity():
    rows = run_workload(3, bounds=8, validate=True)
    assert [r["bound"] for r in rows] == list(range(1, 9))
    for r in rows:
        assert r["proof_len_plain"] >= 1 and r["proof_len_min"] >= 1
        assert r["steps_plain"] >= 1 and r["steps_min"] >= 1


def test_color_ordered_and_rounds_validate():
    run_workload(5, bounds=6, rounds=2, color_ordered=True, validate=True)


def test_csv_deterministic_without_timing():
    a = to_csv(run_bench(2, 5, seed=11), timing=False)
    b = to_csv(run_bench(2, 5, seed=11), timing=False)
    assert a == b
    lines = a.splitlines()
    assert lines[0] == ",".join(COLUMNS)
    assert len(lines) == 1 + 2 * 5
    assert all(line.split(",")[6:8] == ["NA", "NA"] for line in lines[1:])


def test_summary_counts():
    rows = [
        {"workload": 0, "proof_len_plain": 10, "proof_len_min": 5, "t_itp_plain": 1.0, "t_itp_min": 0.5},
        {"workload": 1, "proof_len_plain": 4, "proof_len_min": 6, "t_itp_plain": 0.4, "t_itp_min": 0.6},
    ]
    s = summarize(rows)
    assert s.workloads == 2 and s.min_le_plain == 1
    assert math.isclose(s.median_reduction, 0.0, abs_tol=1e-12)
    assert math.isclose(s.spearman, 1.0)
    assert len(s.lines()) == 4
