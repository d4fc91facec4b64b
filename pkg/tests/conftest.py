import numpy as np
import pytest

from zonalspd.spaces import Space, catalog

# one representative per family plus a few higher dimensions
SPACES = [
    Space("circle", 1),
    Space("sphere", 2),
    Space("sphere", 3),
    Space("sphere", 5),
    Space("real_projective", 2),
    Space("real_projective", 3),
    Space("real_projective", 5),
    Space("complex_projective", 4),
    Space("complex_projective", 6),
    Space("quaternion_projective", 8),
]

GEOMETRIC = [s for s in catalog(16, include_cayley=False)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def finite_spec(space: Space, values) -> dict:
    return {
        "space": {"family": space.family.value, "d": space.d},
        "coeffs": {"type": "finite", "values": [list(v) for v in values]},
    }


def geometric_spec(space: Space, ratio=0.5, aps=((1, 0),), added=(), removed=(), scale=1.0) -> dict:
    return {
        "space": {"family": space.family.value, "d": space.d},
        "coeffs": {
            "type": "geometric",
            "scale": scale,
            "ratio": ratio,
            "support": {"aps": [list(a) for a in aps], "added": list(added), "removed": list(removed)},
        },
    }


# acceptance criteria report lines, printed at the end of the run
ACCEPTANCE = []


def record(number: int, passed: bool, detail: str) -> str:
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE.append((number, line))
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE):
        terminalreporter.write_line(line)
