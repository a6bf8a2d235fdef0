"""Streaming quickest change detection.

CUSUM-family sequential detectors (CUSUM, generalized CUSUM, non-iid CUSUM,
deviation CUSUM), summary statistics with baseline learning, windowed
spectrum estimation, spike-train simulation, and Monte Carlo run-length
calibration. The heavy lifting lives in the compiled `_qcd` extension.
"""

from qcd._qcd import *  # noqa: F401,F403
from qcd._qcd import __version__  # noqa: F401
