"""
Command-line front end: experiment configs, subcommands and exit codes.
"""

from riskbound.cli.experiment import ExperimentConfig, load_experiment, parse_experiment

__all__ = ['ExperimentConfig', 'load_experiment', 'parse_experiment']
