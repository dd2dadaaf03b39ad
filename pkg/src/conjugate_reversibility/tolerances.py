"""
Tolerance configurations shared by every stage of the analysis pipeline.
"""

import math
import os
from dataclasses import asdict, dataclass, fields, replace
from typing import Dict, Mapping, Optional, Union

from .exceptions import InvalidPresetError, InvalidToleranceError

ENV_TOLERANCE_SCALE = "CREV_DEFAULT_TOL"

# Fields left untouched by the CREV_DEFAULT_TOL scale.
_UNSCALED = ("max_iterations", "solver_tol")


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances for root finding, Jordan recovery and verdicts.

    Attributes:
        det_tol: Allowed |det - 1| for a group element (and |det| floor for invertibility)
        cluster_tol: Roots closer than this (relative to max(1, |z|)) share a cluster
        solver_tol: Relative residual at which an Aberth iterate is frozen
        max_iterations: Aberth iteration cap
        root_noise: Relative coefficient uncertainty that can move a multiple root
        rank_tol: Singular values below rank_tol * scale count as zero
        unit_tol: Eigenvalues with ||z| - 1| <= unit_tol are treated as unit modulus
        match_tol: Distance within which a cluster matches conj(lambda)^-1
        chain_tol: Relative residual allowed for A P - P J
        witness_tol: Base acceptance threshold for reverser residuals
        res_tol: The resultant counts as zero once Sylvester condition * res_tol >= 1
        coeff_tol: Tolerance for coefficient comparisons (c-reciprocity, SL(4) tests)
    """

    det_tol: float = 1e-8
    cluster_tol: float = 1e-7
    solver_tol: float = 1e-13
    max_iterations: int = 200
    root_noise: float = 1e-11
    rank_tol: float = 1e-10
    unit_tol: float = 1e-8
    match_tol: float = 1e-6
    chain_tol: float = 1e-8
    witness_tol: float = 1e-6
    res_tol: float = 1e-9
    coeff_tol: float = 1e-9

    def __post_init__(self) -> None:
        """Validate tolerance values after initialization."""
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "max_iterations":
                if not isinstance(value, int) or value < 1:
                    raise InvalidToleranceError(
                        f"max_iterations must be a positive integer, got {value!r}"
                    )
                continue
            if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
                raise InvalidToleranceError(f"{f.name} must be a finite positive number, got {value!r}")

    @classmethod
    def names(cls) -> tuple:
        """Names of all configurable fields."""
        return tuple(f.name for f in fields(cls))

    def with_overrides(self, overrides: Optional[Mapping[str, Union[int, float]]]) -> "ToleranceConfig":
        """Return a copy with some tolerances replaced.

        Raises:
            InvalidToleranceError: If a name is unknown or a value is invalid
        """
        if not overrides:
            return self
        known = self.names()
        unknown = sorted(name for name in overrides if name not in known)
        if unknown:
            raise InvalidToleranceError(
                f"Unknown tolerance(s): {', '.join(unknown)}. Known: {', '.join(known)}"
            )
        values = dict(overrides)
        iterations = values.get("max_iterations")
        if isinstance(iterations, float) and iterations.is_integer():
            values["max_iterations"] = int(iterations)
        return replace(self, **values)

    def scaled(self, factor: float) -> "ToleranceConfig":
        """Return a copy with every scalable tolerance multiplied by ``factor``."""
        if not math.isfinite(factor) or factor <= 0:
            raise InvalidToleranceError(f"Tolerance scale must be a finite positive number, got {factor}")
        values = {
            f.name: getattr(self, f.name) * factor
            for f in fields(self)
            if f.name not in _UNSCALED
        }
        return replace(self, **values)

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "ToleranceConfig":
        """Build the default configuration, honouring ``CREV_DEFAULT_TOL``."""
        env = os.environ if environ is None else environ
        raw = env.get(ENV_TOLERANCE_SCALE)
        config = cls()
        if raw is None or raw.strip() == "":
            return config
        try:
            factor = float(raw)
        except ValueError:
            raise InvalidToleranceError(f"{ENV_TOLERANCE_SCALE} must be a number, got {raw!r}")
        return config.scaled(factor)

    def to_dict(self) -> Dict[str, Union[int, float]]:
        return asdict(self)


PRESETS: Dict[str, ToleranceConfig] = {
    "default": ToleranceConfig(),
    # Tighter verdicts for exactly representable inputs.
    "strict": ToleranceConfig(
        det_tol=1e-12,
        cluster_tol=1e-9,
        unit_tol=1e-11,
        match_tol=1e-9,
        chain_tol=1e-10,
        witness_tol=1e-9,
        res_tol=1e-12,
        coeff_tol=1e-12,
    ),
    # Measured or rounded data.
    "loose": ToleranceConfig(
        det_tol=1e-5,
        cluster_tol=1e-5,
        root_noise=1e-9,
        rank_tol=1e-8,
        unit_tol=1e-6,
        match_tol=1e-4,
        chain_tol=1e-6,
        witness_tol=1e-4,
        res_tol=1e-7,
        coeff_tol=1e-7,
    ),
}

PRESET_DESCRIPTIONS: Dict[str, str] = {
    "default": "Library defaults",
    "strict": "Exact or integer inputs",
    "loose": "Measured or rounded inputs",
}


def get_preset(name: str) -> ToleranceConfig:
    """Get a tolerance preset by name.

    Raises:
        InvalidPresetError: If preset name doesn't exist
    """
    if name not in PRESETS:
        available = ", ".join(PRESETS.keys())
        raise InvalidPresetError(f"Unknown preset '{name}'. Available presets: {available}")
    return PRESETS[name]


def list_presets() -> Dict[str, str]:
    """List all available presets with descriptions."""
    return dict(PRESET_DESCRIPTIONS)
