import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


# acceptance reporting: one PASS/FAIL line per criterion at the end of the run

ACCEPTANCE: dict = {}


class Criterion:
    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.parts = []

    def check(self, ok: bool, detail: str) -> bool:
        self.parts.append((bool(ok), detail))
        return bool(ok)

    @property
    def ok(self) -> bool:
        return bool(self.parts) and all(ok for ok, _ in self.parts)


def criterion(number: int, title: str) -> Criterion:
    return ACCEPTANCE.setdefault(number, Criterion(number, title))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        c = ACCEPTANCE[n]
        tr.write_line(f"{'PASS' if c.ok else 'FAIL'}  criterion {n:2d}: {c.title}")
        for ok, detail in c.parts:
            tr.write_line(f"        {'ok ' if ok else 'BAD'} {detail}")
