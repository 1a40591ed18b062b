"""
Numeric tolerance bundle shared by every stage of the pipeline.
"""

from dataclasses import dataclass, fields, asdict

from .errors import ConfigError
from .matching import unknown_key_message


@dataclass(frozen=True)
class Tolerances:
    """
    Tolerances used across the analyzers.

    Parameters:
    -----------
    tau_det : float
        Allowed drift of the determinant from 1 after normalization.
    tau_tr : float
        Trace tolerance for the parabolic boundary and for "real trace".
    tau_pt : float
        Chordal tolerance for point equality and deduplication.
    tau_bump : float
        Chordal tolerance for bump candidates.
    tau_stab : float
        One-sided chordal Hausdorff tolerance of the stabilizer test.
    tau_ang : float
        Angular tolerance (radians) on the unit circle.
    gap_eps : float
        Minimal circular gap that produces a hull boundary geodesic.
    tau_acc : float
        Accumulation floor for orbit geodesics.
    n_min : int
        Smallest quasicircle sample accepted by numeric tests.
    """
    tau_det: float = 1e-9
    tau_tr: float = 1e-8
    tau_pt: float = 1e-6
    tau_bump: float = 5e-3
    tau_stab: float = 5e-2
    tau_ang: float = 1e-6
    gap_eps: float = 1e-3
    tau_acc: float = 1e-4
    n_min: int = 8

    @property
    def tau_gap(self):
        return 10.0 * self.tau_bump

    @property
    def dense_gap(self):
        return 10.0 * self.gap_eps

    @classmethod
    def from_mapping(cls, values=None):
        """Build a bundle from a mapping of overrides, rejecting unknown or non-positive entries."""
        values = dict(values or {})
        names = [f.name for f in fields(cls)]
        for key in values:
            if key not in names:
                raise ConfigError(unknown_key_message(key, names, 'tolerances'))
        kwargs = {}
        for key, value in values.items():
            try:
                number = int(value) if key == 'n_min' else float(value)
            except (TypeError, ValueError):
                raise ConfigError(f"Tolerance '{key}' must be a number, got {value!r}")
            if number <= 0:
                raise ConfigError(f"Tolerance '{key}' must be positive, got {number}")
            kwargs[key] = number
        return cls(**kwargs)

    def to_dict(self):
        return asdict(self)
