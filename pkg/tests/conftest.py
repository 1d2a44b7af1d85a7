import time

SUITE_BUDGET_S = 120.0
_start = time.perf_counter()
_selected = {"all": False}


def pytest_collection_modifyitems(session, config, items):
    # the runtime budget applies to the full suite only
    _selected["all"] = len({item.path.name for item in items}) > 1


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    elapsed = time.perf_counter() - _start
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[num])
    if _selected["all"]:
        ok = elapsed < SUITE_BUDGET_S
        terminalreporter.write_line(
            f"[{'PASS' if ok else 'FAIL'}] 12. full suite runtime {elapsed:.1f} s (budget {SUITE_BUDGET_S:.0f} s)")


def pytest_sessionfinish(session, exitstatus):
    if _selected["all"] and time.perf_counter() - _start >= SUITE_BUDGET_S and exitstatus == 0:
        session.exitstatus = 1
