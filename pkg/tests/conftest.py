from functools import lru_cache

import pytest

from fbmkl import assemble, build_expansion, build_table


@lru_cache(maxsize=None)
def galerkin_matrix(h, size):
    return assemble(h, size)


@lru_cache(maxsize=None)
def expansion(h, terms):
    return build_expansion(h, terms)


@lru_cache(maxsize=None)
def table(h, terms, sine_count):
    return build_table(expansion(h, terms), sine_count)


@pytest.fixture(scope="session")
def cached():
    class _Cache:
        galerkin = staticmethod(galerkin_matrix)
        expansion = staticmethod(expansion)
        table = staticmethod(table)

    return _Cache


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
