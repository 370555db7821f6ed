import pytest

from orbitspace.fileformat import curated_path, load_instance
from orbitspace.groupmodel import ComponentElement, GroupSpec


def with_gens(spec: GroupSpec, *gens) -> GroupSpec:
    return spec.with_generators([ComponentElement.make(spec, **g) for g in gens])


@pytest.fixture
def curated():
    def load(name):
        return load_instance(curated_path(name)).spec
    return load


@pytest.fixture
def torus4():
    """m = 2 with P = {(1,0),(0,1),(1,1),(1,-1)} and the conjugation generator."""
    base = GroupSpec(2, 1, ((1, 0), (0, 1), (1, 1), (1, -1)))
    return with_gens(base, dict(ad=[[-1, 0], [0, -1]], line_conj=[1, 1, 1, 1]))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
