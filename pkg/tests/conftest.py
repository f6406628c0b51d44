import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

import trace_log  # noqa: E402

trace_log.install()


def pytest_sessionfinish(session, exitstatus):
    log = trace_log.LOG
    if log["claim2_failures"] or log["claim3_failures"]:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    log = trace_log.LOG
    tr = terminalreporter
    if trace_log.ACCEPTANCE:
        tr.section("acceptance criteria")
        for n in sorted(trace_log.ACCEPTANCE):
            tr.write_line(trace_log.ACCEPTANCE[n])
    tr.section("potential traces (whole run)")
    tr.write_line(f"two-step decrease: {log['traces']} traces checked, "
                  f"{len(log['claim2_failures'])} violations")
    tr.write_line(f"face inclusions: {log['fixpoint_runs']} facet runs reached a fixpoint, "
                  f"{len(log['claim3_failures'])} failures")
    for where, u in log["claim2_failures"][:5]:
        tr.write_line(f"  violation in {where}: {u}")
