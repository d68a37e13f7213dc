from iterant import algebra as alg
from iterant import selftest
from iterant.algebra import IterantElement
from iterant.cli import main


def test_all_sections_pass():
    table = selftest.section_table(selftest.run_selftest())
    assert [key for key, _ in table] == [key for key, _ in selftest.SECTIONS]
    assert all(ok for _, ok in table)


def _mul_without_swap(x, y):
    # drops the swap that eta forces on the right-hand view
    a, b, c, d = x.even, x.odd, y.even, y.odd
    return IterantElement(a * c + b * d, a * d + b * c)


def test_corrupted_eta_rule_fails_iterant_section(monkeypatch, capsys):
    monkeypatch.setattr(alg, "mul", _mul_without_swap)
    results = selftest.run_selftest()
    table = dict(selftest.section_table(results))
    assert table["iterant"] is False
    failed = {r.name for r in results if not r.passed}
    assert "eta commutation" in failed and "i^2 = -1" in failed

    assert main(["selftest"]) == 1
    out = capsys.readouterr().out
    assert "iterant      FAIL" in out
    assert "FAILED iterant: eta commutation" in out
