import numpy as np
import pytest

from friscov import SurfaceGeometry, correlation_matrix


@pytest.fixture(scope="session")
def ref_geom() -> SurfaceGeometry:
    """Reference surface: 12x12 ports over a 2x2-wavelength aperture at 0.125 m."""
    return SurfaceGeometry(m_x=12, m_z=12, w_x=2.0, w_z=2.0, wavelength=0.125)


@pytest.fixture(scope="session")
def ref_corr(ref_geom) -> np.ndarray:
    return correlation_matrix(ref_geom)
