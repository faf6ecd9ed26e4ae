from pathlib import Path

import pytest

ZERO_TABLE_PATH = Path(__file__).resolve().parents[1] / "data" / "zeros_100k.txt"


@pytest.fixture(scope="session")
def zero_table():
    from pointspec.cli import ingest_zeros

    if not ZERO_TABLE_PATH.exists():
        pytest.fail(
            "bundled zero table missing; regenerate with scripts/make_zero_table.py"
        )
    return ingest_zeros(ZERO_TABLE_PATH)


@pytest.fixture(scope="session")
def zeta(zero_table):
    from pointspec.cli import load_unfolded

    return load_unfolded(zero_table)
