"""
riskbound - robust performance bounds under mixed aleatoric/epistemic uncertainty.

Builds polynomial-chaos surrogates of a model output and bounds its expectation
over relative-entropy ambiguity sets through risk-sensitive integrals.
"""

__version__ = "1.0.0"
