"""Pytest configuration and fixtures for the numerical core tests."""

import pytest

from kennedy_bounds.core.models import DetectorModel, ProbeSpec, TruncationConfig


@pytest.fixture
def cfg64():
    """Default truncation: 64 number states."""
    return TruncationConfig(dim=64)


@pytest.fixture
def cfg40():
    return TruncationConfig(dim=40)


@pytest.fixture
def cfg24():
    """Small basis for the two-mode beamsplitter."""
    return TruncationConfig(dim=24)


@pytest.fixture
def squeezed_probe():
    """A displaced squeezed probe in the regime where the Fock oracle is tight at dim 64."""
    return ProbeSpec(alpha=1.0, r=0.5)


@pytest.fixture
def ideal_detector():
    return DetectorModel.ideal()


@pytest.fixture
def phi_grid():
    return [0.0, 0.01, 0.1, 0.5]
