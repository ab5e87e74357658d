from hypothesis import HealthCheck, settings, strategies as st

from unitgroups.abelian import normalize

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

orders = st.lists(st.integers(min_value=1, max_value=60), max_size=5)
groups = orders.map(normalize)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
