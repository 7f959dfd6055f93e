"""
Run Config Entity - Configuração validada de uma execução da CLI
"""

from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

COMMANDS = ("qfi", "bounds", "measure", "escher", "fit-orders", "validate-channel")


def _strictly_increasing(values: List[float], name: str) -> List[float]:
    if not values:
        raise ValueError(f"{name} grid must not be empty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{name} grid must be strictly increasing")
    return values


class RunConfig(BaseModel):
    """Configuração de uma execução; valida grades, vetores e parâmetros numéricos"""

    model_config = ConfigDict(extra='forbid', frozen=True)

    command: Literal["qfi", "bounds", "measure", "escher", "fit-orders", "validate-channel"]
    channel: str = "phase_flip"
    params: Dict[str, float] = Field(default_factory=dict)
    expressions: Dict[str, str] = Field(default_factory=dict)
    domain: Optional[Tuple[float, float]] = None

    protocol: Literal["sqsc", "correlated"] = "correlated"
    lambdas: List[float] = Field(default_factory=lambda: [0.2])
    purities: List[float] = Field(default_factory=lambda: [1e-3])
    ns: List[int] = Field(default_factory=lambda: [2])
    c: Optional[Tuple[float, float, float]] = None
    r0: Optional[Tuple[float, float, float]] = None

    out: Optional[Path] = None
    format: Literal["csv", "json"] = "csv"
    jobs: int = Field(default=1, gt=0)

    fd_step: float = Field(default=1e-6, gt=0)
    measurement_fd_step: float = Field(default=1e-5, gt=0)
    eps: float = Field(default=1e-12, gt=0)
    max_order: int = Field(default=4, gt=0, le=4)
    fit_samples: int = Field(default=11, ge=5)
    fit_r_min: float = Field(default=1e-3, gt=0)
    fit_r_max: float = Field(default=1e-2, gt=0, lt=1)

    @field_validator('lambdas')
    @classmethod
    def _check_lambdas(cls, values: List[float]) -> List[float]:
        return _strictly_increasing(values, 'lambda')

    @field_validator('purities')
    @classmethod
    def _check_purities(cls, values: List[float]) -> List[float]:
        values = _strictly_increasing(values, 'purity')
        if values[0] < 0 or values[-1] > 1:
            raise ValueError("purity grid must lie inside [0, 1]")
        return values

    @field_validator('ns')
    @classmethod
    def _check_ns(cls, values: List[int]) -> List[int]:
        values = _strictly_increasing(values, 'n')
        if values[0] < 1:
            raise ValueError("qubit counts must be positive")
        return values

    @field_validator('c', 'r0')
    @classmethod
    def _check_unit(cls, value):
        if value is not None and abs(float(np.linalg.norm(value)) - 1.0) > 1e-9:
            raise ValueError(f"direction {list(value)} is not a unit vector")
        return value

    @model_validator(mode='after')
    def _check_consistency(self) -> 'RunConfig':
        if self.fit_r_min >= self.fit_r_max:
            raise ValueError("fit_r_min must be smaller than fit_r_max")
        if self.protocol == "correlated" and self.command in ("qfi", "fit-orders", "measure") and self.ns[0] < 2:
            raise ValueError("correlated protocol needs n >= 2")
        if (self.c is None) != (self.r0 is None) and self.protocol == "correlated":
            raise ValueError("give both c and r0, or neither for the canonical directions")
        if self.command == "measure" and self.protocol != "correlated":
            raise ValueError("measure works on the correlated protocol only")
        return self

    @property
    def uses_canonical_directions(self) -> bool:
        return self.c is None and self.r0 is None
