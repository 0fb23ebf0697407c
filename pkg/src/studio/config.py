"""Sweep configuration: axes, output schema and grid points."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, Tuple

import numpy as np

from src.engine.models import (
    EvolutionParams,
    Family,
    InitialStateSpec,
    InputState,
    ModelParams,
    Variant,
)

DEFAULT_MAX_POINTS = 10**7


class Output(Enum):
    """Quantities a sweep can emit per grid point."""
    C = "C"
    C_OUT = "C_out"
    F = "F"
    F_ASYMPTOTIC = "F_asymptotic"


# Outputs that need a teleportation input state.
TELEPORT_OUTPUTS = frozenset({Output.C_OUT, Output.F, Output.F_ASYMPTOTIC})
# Outputs that need a time axis.
TIMED_OUTPUTS = frozenset({Output.C, Output.C_OUT, Output.F})


class AxisKind(Enum):
    SCALAR = "scalar"
    LIST = "list"
    RANGE = "range"


@dataclass(frozen=True)
class Axis:
    """
    One numeric sweep axis.

    A scalar, an explicit list of panel values, or an inclusive range of
    ``count`` evenly spaced points from ``start`` to ``stop``.
    """
    kind: AxisKind
    values: Tuple[float, ...] = ()
    start: Optional[float] = None
    stop: Optional[float] = None
    count: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind is AxisKind.RANGE:
            if self.start is None or self.stop is None or self.count is None:
                raise ValueError("A range axis needs start, stop and count")
            if not (math.isfinite(self.start) and math.isfinite(self.stop)):
                raise ValueError(f"Range bounds must be finite, got ({self.start}, {self.stop})")
            if self.count < 1:
                raise ValueError(f"Range count must be at least 1, got {self.count}")
            if self.start > self.stop:
                raise ValueError(f"Range start {self.start} exceeds stop {self.stop}")
        else:
            if not self.values:
                raise ValueError("An axis needs at least one value")
            if self.kind is AxisKind.SCALAR and len(self.values) != 1:
                raise ValueError("A scalar axis holds exactly one value")
            bad = [v for v in self.values if not math.isfinite(v)]
            if bad:
                raise ValueError(f"Axis values must be finite, got {bad}")

    @classmethod
    def scalar(cls, value: float) -> "Axis":
        return cls(kind=AxisKind.SCALAR, values=(float(value),))

    @classmethod
    def of(cls, values) -> "Axis":
        return cls(kind=AxisKind.LIST, values=tuple(float(v) for v in values))

    @classmethod
    def range(cls, start: float, stop: float, count: int) -> "Axis":
        return cls(kind=AxisKind.RANGE, start=float(start), stop=float(stop), count=int(count))

    def points(self) -> Tuple[float, ...]:
        """Axis values in sweep order."""
        if self.kind is AxisKind.RANGE:
            return tuple(float(v) for v in np.linspace(self.start, self.stop, self.count))
        return self.values

    def __len__(self) -> int:
        if self.kind is AxisKind.RANGE:
            return self.count
        return len(self.values)


@dataclass(frozen=True)
class GridPoint:
    """A single row of a sweep."""
    model: ModelParams
    Gamma: float
    initial: InitialStateSpec
    t: Optional[float] = None
    input: Optional[InputState] = None

    @property
    def evolution(self) -> EvolutionParams:
        if self.t is None:
            raise ValueError("Grid point has no time coordinate")
        return EvolutionParams(Gamma=self.Gamma, t=self.t)


@dataclass(frozen=True)
class SweepConfig:
    """
    Cartesian parameter grid plus output schema.

    Nesting order (outermost first) is variant, J, gamma, Jz, D, Gamma,
    family, alpha, t, theta, phi.
    """
    variant: Tuple[Variant, ...]
    J: Axis
    gamma: Axis
    Jz: Axis
    D: Axis
    Gamma: Axis
    family: Tuple[Family, ...]
    alpha: Axis
    time: Optional[Axis] = None
    theta: Optional[Axis] = None
    phi: Optional[Axis] = None
    outputs: Tuple[Output, ...] = (Output.C,)
    max_points: int = DEFAULT_MAX_POINTS

    def __post_init__(self) -> None:
        if not self.variant:
            raise ValueError("At least one variant is required")
        if not self.family:
            raise ValueError("At least one initial-state family is required")
        if not self.outputs:
            raise ValueError("At least one output is required")
        if len(set(self.outputs)) != len(self.outputs):
            raise ValueError(f"Duplicate outputs: {[o.value for o in self.outputs]}")
        if self.max_points < 1:
            raise ValueError(f"max_points must be positive, got {self.max_points}")

        if (self.theta is None) != (self.phi is None):
            raise ValueError("input needs both theta and phi")
        wants_input = TELEPORT_OUTPUTS.intersection(self.outputs)
        if wants_input and self.theta is None:
            names = ", ".join(sorted(o.value for o in wants_input))
            raise ValueError(f"Outputs {names} need an input state (theta, phi)")
        if self.time is None and TIMED_OUTPUTS.intersection(self.outputs):
            raise ValueError("A time axis is required unless the only output is F_asymptotic")

        size = self.grid_size()
        if size > self.max_points:
            raise ValueError(f"Grid has {size} points, cap is {self.max_points}")

        for value in self.Gamma.points():
            if value < 0:
                raise ValueError(f"Gamma must be non-negative, got {value}")
        if self.time is not None and min(self.time.points()) < 0:
            raise ValueError("Time values must be non-negative")
        if self.theta is not None:
            # InputState enforces the ranges, one axis at a time
            for theta in self.theta.points():
                InputState(theta=theta, phi=0.0)
            for phi in self.phi.points():
                InputState(theta=0.0, phi=phi)

    @property
    def has_input(self) -> bool:
        return self.theta is not None

    def times(self) -> Tuple[Optional[float], ...]:
        return self.time.points() if self.time is not None else (None,)

    def inputs(self) -> Tuple[Optional[InputState], ...]:
        if not self.has_input:
            return (None,)
        return tuple(
            InputState(theta=theta, phi=phi)
            for theta in self.theta.points()
            for phi in self.phi.points()
        )

    def grid_size(self) -> int:
        size = len(self.variant) * len(self.family)
        for axis in (self.J, self.gamma, self.Jz, self.D, self.Gamma, self.alpha):
            size *= len(axis)
        for axis in (self.time, self.theta, self.phi):
            if axis is not None:
                size *= len(axis)
        return size

    def model_params(self) -> Iterator[ModelParams]:
        """Distinct couplings in nesting order."""
        for variant in self.variant:
            for J in self.J.points():
                for gamma in self.gamma.points():
                    for Jz in self.Jz.points():
                        for D in self.D.points():
                            yield ModelParams(variant=variant, J=J, gamma=gamma, Jz=Jz, D=D)

    def channels(self) -> Iterator[Tuple[ModelParams, float, InitialStateSpec]]:
        """(model, Gamma, initial state) triples in nesting order."""
        for model in self.model_params():
            for Gamma in self.Gamma.points():
                for family in self.family:
                    for alpha in self.alpha.points():
                        yield model, Gamma, InitialStateSpec(family=family, alpha=alpha)

    def grid(self) -> Iterator[GridPoint]:
        """Every grid point in row order."""
        inputs = self.inputs()
        for model, Gamma, initial in self.channels():
            for t in self.times():
                for state in inputs:
                    yield GridPoint(model=model, Gamma=Gamma, initial=initial, t=t, input=state)
