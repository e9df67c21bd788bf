from .errors import PlapkitError
from .lattice import (LatticeWindow, Sequence, ProblemParams, CoefficientProfile, forward_difference, sign_split,
                      norm_p_power, weighted_norm_p, lp_norm, sign_change_count, appendix1_profile)
from .lattice_series import SequenceSeries
from .utils import load_coefficient_file
from .processor import Processor
from .energy_processor import EnergyProcessor, EnergyReport, FiberPoint
from .inequality_processor import (InequalityProcessor, ThetaInputs, EpsilonBound, SeriesParams, theta, theta_young,
                                   theta_prime, theta_ratio, scalar_log_inequality, monotone_quotient,
                                   growth_bound_fit, appendix1_partial_sum, appendix1_partial_sums,
                                   appendix1_norm_partial_sums)
from .nehari_processor import NehariProcessor, NehariPoint, SignChangingPoint
from .ground_state_processor import GroundStateProcessor, SolveConfig, SolveResult
from .verification_result_set import VerificationResultSet
from .solve_result_set import SolveResultSet
