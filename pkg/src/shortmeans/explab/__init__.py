"""Experiment runner, check suites and the ``explab`` command line."""

from .checks import SUITES, SuiteReport, check_suite
from .runner import (PRNG_ALGORITHM, ExperimentConfig, ExperimentRecord, ExponentFit, fit_exponent,
                     random_sieve_spec, run_grid, theta_admissible)

__all__ = ["SUITES", "SuiteReport", "check_suite", "PRNG_ALGORITHM", "ExperimentConfig", "ExperimentRecord",
           "ExponentFit", "fit_exponent", "random_sieve_spec", "run_grid", "theta_admissible"]
