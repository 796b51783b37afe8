import itertools
from collections import Counter

import numpy as np
import pytest

from sidonforge.groups import GroupKind


def brute_counts(group, elements):
    """Independent ordered/restricted/unordered counts from the definitions."""
    r, rr, ru = Counter(), Counter(), Counter()
    for a1, a2 in itertools.product(elements, repeat=2):
        if group.kind is GroupKind.INTERVAL:
            x = a1 + a2
        elif group.kind is GroupKind.CYCLIC:
            x = (a1 + a2) % group.param
        else:
            p = group.param
            x = ((a1[0] + a2[0]) % p, (a1[1] + a2[1]) % p)
        r[x] += 1
        if a1 != a2:
            rr[x] += 1
        if a1 <= a2:
            ru[x] += 1
    return r, rr, ru


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
