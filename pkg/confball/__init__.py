from confball import errors
from confball import distributions
from confball import radii
from confball import bounds
from confball import models
from confball import core
from confball import varselect
from confball import sim

from confball.radii import Interval, Known, RadiusSolver
from confball.models import ModelFamily, fourier_family
from confball.core import BallBuilder, ConfidenceBall, build_ball

__version__ = "0.1.0"
