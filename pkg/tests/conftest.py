import numpy as np
import pytest

from modefs.data import Dataset


def make(features, labels, n_classes=None):
    features = np.asarray(features, dtype=float)
    labels = np.asarray(labels)
    return Dataset(
        features,
        labels,
        tuple(f"f{j}" for j in range(features.shape[1])),
        int(labels.max()) + 1 if n_classes is None else n_classes,
    )


@pytest.fixture
def toy12():
    """12 instances, 3 features, two classes; seeded."""
    rng = np.random.default_rng(12)
    y = np.array([0, 1] * 6)
    x = rng.random((12, 3)) + 0.3 * y[:, None]
    return make(x / x.max(axis=0), y)


@pytest.fixture
def write_csv(tmp_path):
    def _write(text, name="data.csv"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


# acceptance verdicts, one entry per criterion; printed after the run
ACCEPTANCE: dict[str, list[tuple[bool, str]]] = {}


def record_criterion(key: str, ok: bool, detail: str) -> None:
    ACCEPTANCE.setdefault(key, []).append((bool(ok), detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k)):
        parts = ACCEPTANCE[key]
        verdict = "PASS" if all(ok for ok, _ in parts) else "FAIL"
        terminalreporter.write_line(f"criterion {key}: {verdict}  " + "; ".join(d for _, d in parts))
