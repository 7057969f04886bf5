import sys

from hypothesis import settings, strategies as st

from dustcarpet.pattern import Pattern

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@st.composite
def patterns(draw, p=3):
    cells = [(c, r) for r in range(p) for c in range(p)]
    kept = draw(st.sets(st.sampled_from(cells), min_size=1, max_size=p * p - 1))
    return Pattern(p, frozenset(kept))


def all_patterns(p=3, m_min=1):
    cells = [(c, r) for r in range(p) for c in range(p)]
    for mask in range(1, 2 ** (p * p) - 1):
        kept = frozenset(c for i, c in enumerate(cells) if mask >> i & 1)
        if len(kept) >= m_min:
            yield Pattern(p, kept)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
