"""Reference loop builds used throughout the examples and regression checks."""
from __future__ import annotations

from scipy.constants import pi

from .resonator import LoopGeometry
from .tline import Conductor, Dielectric, Microstrip, Stripline

COPPER_SIGMA = 5.8e7
# RT/duroid 5880; see README for why the loss tangent is 0.0009
DUROID_5880 = Dielectric(eps_r=2.2, tan_d=0.0009)

LOOP_RADIUS = 0.09
CROSS_WIDTH = 20e-3
STRIPLINE_THICKNESS = 3.32e-3
STRIPLINE_COPPER = 70e-6
MICROSTRIP_THICKNESS = 1.575e-3
MICROSTRIP_COPPER = 70e-6

# 50 ohm feed microstrip: 2 mm strip on 813 um, eps_r 3.0
FEED_DIELECTRIC = Dielectric(eps_r=3.0, tan_d=0.001)
FEED_CONDUCTOR = Conductor(sigma=COPPER_SIGMA, thickness=35e-6)
FEED_LINE = Microstrip(width=2e-3, d=813e-6, t=35e-6)
FEED_GAMMA = 0.0105 + 1.31j
FEED_Z0 = 50.38 - 0.3585j


def stripline_loop(
    width: float = 10e-3,
    slit_angle: float = pi,
    dielectric: Dielectric = DUROID_5880,
    copper: float = STRIPLINE_COPPER,
) -> LoopGeometry:
    """Shielded stripline loop; ground spacing is the stack minus both ground foils."""
    h = STRIPLINE_THICKNESS - 2 * copper
    return LoopGeometry(
        loop_radius=LOOP_RADIUS,
        cross_width=CROSS_WIDTH,
        cross_section=Stripline(width=width, h=h, t=copper),
        dielectric=dielectric,
        conductor=Conductor(sigma=COPPER_SIGMA, thickness=copper),
        slit_angle=slit_angle,
        cross_thickness=STRIPLINE_THICKNESS,
    )


def microstrip_loop(
    width: float = 10e-3,
    slit_angle: float = pi,
    dielectric: Dielectric = DUROID_5880,
    copper: float = MICROSTRIP_COPPER,
) -> LoopGeometry:
    return LoopGeometry(
        loop_radius=LOOP_RADIUS,
        cross_width=CROSS_WIDTH,
        cross_section=Microstrip(width=width, d=MICROSTRIP_THICKNESS, t=copper),
        dielectric=dielectric,
        conductor=Conductor(sigma=COPPER_SIGMA, thickness=copper),
        slit_angle=slit_angle,
        cross_thickness=MICROSTRIP_THICKNESS,
    )
