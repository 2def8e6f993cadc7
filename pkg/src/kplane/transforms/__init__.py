"""k-plane transforms of radial phantoms, backprojection and inversion sweeps."""

from .backprojection import (SweepResult, backproject_mc, backproject_reduced,
                             convolve_oracle, disc_average_filter, invert_sweep,
                             plane_integral, sphere_integral)
from .geometry import Frame, FlatParam, haar_frame, haar_frames, point_flat_distance
from .phantoms import BallPhantom, GaussianPhantom, kplane_numeric, phantom_hat

__all__ = [
    "Frame", "FlatParam", "haar_frame", "haar_frames", "point_flat_distance",
    "GaussianPhantom", "BallPhantom", "phantom_hat", "kplane_numeric",
    "sphere_integral", "plane_integral", "backproject_reduced", "backproject_mc",
    "convolve_oracle", "SweepResult", "invert_sweep", "disc_average_filter",
]
