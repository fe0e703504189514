"""Born scattering of Gaussian wave packets on central potentials."""

__version__ = "0.1.0"

from .born import (
    amplitude_function,
    born_gaussian,
    born_hydrogen,
    born_numeric,
    sigma_standard,
    tabulate_amplitude,
)
from .model import (
    CustomRadial,
    GaussianWell,
    HydrogenGround,
    Kinematics,
    PacketSpec,
    RegimeReport,
    make_kinematics,
    validate_regime,
)
from .packet import kappa0, luminosity, phi_tr, psi_tr, sigma_perp_t, transverse_density
from .quadrature import QuadratureResult, integrate_1d, integrate_2d, integrate_semi_infinite
from .scan import ConfigError, ScanConfig, ScanRow, ScanTable, Sweep, run_figure, run_scan
from .scattering import (
    AveragedCrossSection,
    EventDensity,
    GaussGaussFactors,
    avg_xsec,
    avg_xsec_gauss_gauss,
    avg_xsec_hydrogen,
    avg_xsec_numeric,
    events,
    events_gauss_gauss,
    events_hydrogen,
    events_numeric,
    f_packet_gaussian,
    f_packet_numeric,
    gauss_gauss_factors,
    total_events_ratio,
)
