"""Shared fixtures: a small cantilevered plate with a one-element notch.

The 80 x 40 mm plate meshed 4x2 is the cheapest model whose dynamics are
still nontrivial; 530 and 3000 Hz sit near its first resonances so the
objective depends on every element.
"""

import numpy as np
import pytest

from platedamage import (
    BoundarySpec,
    MaterialModel,
    NotchSpec,
    PlateGeometry,
    build_model,
    synth_dataset,
)

# A2017 aluminum with the damping identified on the wide test plate
ALUMINUM_B = MaterialModel(
    72.5e9, 0.33, 2790.0, rayleigh_alpha=1.94, rayleigh_beta=7.53e-7
)

TINY_FREQS_HZ = (530.0, 3000.0)

TINY_POINTS = tuple((x, y) for y in (0.012, 0.028) for x in (0.02, 0.04, 0.06))


@pytest.fixture(scope="session")
def tiny_model():
    geometry = PlateGeometry(0.08, 0.04, 0.005)
    boundary = BoundarySpec("left", (0.07, 0.03), TINY_POINTS)
    return build_model(geometry, ALUMINUM_B, boundary, 0.02)


@pytest.fixture(scope="session")
def tiny_notch():
    # exactly one element of the 4x2 mesh (i=2, j=1 -> element 6)
    return NotchSpec(0.04, 0.02, 0.02, 0.02)


@pytest.fixture(scope="session")
def tiny_omegas():
    return 2.0 * np.pi * np.asarray(TINY_FREQS_HZ)


@pytest.fixture(scope="session")
def tiny_case(tiny_model, tiny_notch, tiny_omegas):
    """Noise-free FRFs of the notched plate plus the truth field."""
    return synth_dataset(tiny_model, tiny_notch, tiny_omegas)


@pytest.fixture(scope="session")
def tiny_healthy(tiny_model, tiny_omegas):
    dataset, _ = synth_dataset(tiny_model, None, tiny_omegas)
    return dataset
