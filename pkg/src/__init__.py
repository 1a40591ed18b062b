"""
Kleinian Bumping Analyzer

Limit sets, components of the domain of discontinuity, bumping sets, Nielsen cores,
uniform-domain estimates and characteristic-submanifold pieces for finitely
generated Kleinian groups, with a command-line front end in ``src.cli``.
"""

__version__ = '1.0.0'
