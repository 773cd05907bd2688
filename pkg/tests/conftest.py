import itertools

import numpy as np
import pytest

ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} ({detail})")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def truncated_ladder_ops(mode_count: int, cutoff: int) -> list[np.ndarray]:
    """Annihilation operators on the product space with ``cutoff + 1`` levels per mode.

    Independent of the sector machinery: plain Kronecker products.
    """
    a = np.diag(np.sqrt(np.arange(1, cutoff + 1)), 1)
    eye = np.eye(cutoff + 1)
    ops = []
    for m in range(mode_count):
        factors = [a if k == m else eye for k in range(mode_count)]
        op = factors[0]
        for f in factors[1:]:
            op = np.kron(op, f)
        ops.append(op)
    return ops


def product_index(occupation, cutoff: int) -> int:
    idx = 0
    for n in occupation:
        idx = idx * (cutoff + 1) + n
    return idx


def sector_isometry(sector, cutoff: int) -> np.ndarray:
    """Columns embed the sector basis into the truncated product space."""
    dim = (cutoff + 1) ** sector.mode_count
    iso = np.zeros((dim, sector.dim))
    for k, state in enumerate(sector.basis):
        iso[product_index(state, cutoff), k] = 1.0
    return iso


def brute_force_sector(mode_count: int, total: int) -> list[tuple[int, ...]]:
    return [s for s in itertools.product(range(total + 1), repeat=mode_count) if sum(s) == total]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
