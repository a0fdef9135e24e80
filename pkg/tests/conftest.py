import mpmath
import pytest

mpmath.mp.dps = 40


def rel_err(a, b):
    a, b = complex(a), complex(b)
    return abs(a - b) / max(abs(b), 1e-300)


@pytest.fixture
def report_line(capsys):
    """Print a line to the real stdout even while pytest captures output."""

    def emit(text):
        with capsys.disabled():
            print(text)

    return emit
