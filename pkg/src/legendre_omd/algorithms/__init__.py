from .omd import (BLOWUP_THRESHOLD, StepSchedule, Trajectory, checkpoints,
                  config_digest, run_mirror_prox, run_omd)
from .checks import (DescentReport, StabilityReport, check_descent_inequality,
                     estimate_stability, stability_lower_bound)

__all__ = [
    "BLOWUP_THRESHOLD", "StepSchedule", "Trajectory", "checkpoints",
    "config_digest", "run_mirror_prox", "run_omd", "DescentReport",
    "StabilityReport", "check_descent_inequality", "estimate_stability",
    "stability_lower_bound",
]
