from atomlaser.checks import CheckResult, run_checks


def test_all_checks_pass_on_small_grid():
    results = run_checks(grid_size=2)
    failing = [r.check_name for r in results if not r.ok]
    assert failing == []


def test_names_unique_and_dict_shape():
    results = run_checks(grid_size=1)
    names = [r.check_name for r in results]
    assert len(names) == len(set(names))
    for r in results:
        d = r.to_dict()
        assert set(d) == {"check_name", "value", "threshold", "pass"}
        assert d["pass"] is r.ok


def test_adjudications_name_the_winners():
    names = {r.check_name for r in run_checks(grid_size=1)}
    assert "fourth_moment_survivor[n2_coeff_60a03]" in names
    assert "photon_recurrence_survivor[ratio_full]" in names


def test_bound_semantics():
    r = CheckResult(check_name="x", value=0.5, threshold=1.0, ok=True)
    assert r.to_dict()["value"] == 0.5
