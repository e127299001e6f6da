import numpy as np
import pytest

from linecover import (
    AffineDensity,
    BumpDensity,
    ConstantDensity,
    PiecewiseLinearDensity,
)


def field_catalog():
    """One representative instance per density family, keyed by family name."""
    return {
        "constant": ConstantDensity(level=1.0),
        "affine": AffineDensity(intercept=1.0, slope=1.0),
        "piecewise-linear": PiecewiseLinearDensity(
            breakpoints=(0.0, 0.25, 0.6, 1.0), values=(1.0, 2.0, 1.2, 1.8)
        ),
        "smooth-bump": BumpDensity(amplitude=2.0, center=0.5, width=0.1),
    }


@pytest.fixture(scope="session")
def fields():
    return field_catalog()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240901)


def random_layout(rng: np.random.Generator, n: int, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    return np.sort(lo + (hi - lo) * rng.random(n))
