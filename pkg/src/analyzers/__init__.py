"""
Analysis Modules

The stages of the analysis, in pipeline order:
- limitset.py: limit-set samples, subgroup quasicircles, rendering
- components.py: components of the domain of discontinuity and their stabilizers
- bumping.py: common stabilizers, bump sets and maximal bumping collections
- nielsen.py: Nielsen cores in the Fuchsian model and the three boundary checks
- uniform.py: uniform-domain constants and the translate diagnostics
- charsub.py: characteristic-submanifold pieces
"""

from . import limitset
from . import components
from . import bumping
from . import nielsen
from . import uniform
from . import charsub

__all__ = [
    'limitset',
    'components',
    'bumping',
    'nielsen',
    'uniform',
    'charsub',
]
