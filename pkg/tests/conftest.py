import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k, title in mod.CRITERIA.items():
        if k in mod.RESULTS:
            ok, detail = mod.RESULTS[k]
            tr.write_line(f"criterion {k:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        else:
            tr.write_line(f"criterion {k:2d} ----  {title}: not run")
    for line in getattr(mod, "DIAGNOSTICS", []):
        tr.write_line(f"diagnostic   {line}")
