"""Sweep engine: evaluates a SweepConfig grid in row order."""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, TextIO, Tuple

import pandas as pd

from src.engine.dynamics import asymptotic_state, decoherence_time, evolve, initial_density
from src.engine.entanglement import concurrence
from src.engine.hamiltonian import numeric_spectrum
from src.engine.models import EvolutionParams, InitialStateSpec, InputState, ModelParams, Spectrum
from src.engine.teleport import fidelity, input_density, teleport_output
from src.reports.csv_report import CSV_COLUMNS, CSVReportWriter
from src.studio.config import GridPoint, Output, SweepConfig

logger = logging.getLogger(__name__)

DEFAULT_CHUNK_ROWS = 50_000

_NAN = math.nan


@lru_cache(maxsize=4096)
def cached_spectrum(model: ModelParams) -> Spectrum:
    """Jacobi spectrum, shared by every grid point with the same couplings."""
    return numeric_spectrum(model)


@dataclass(frozen=True)
class ChannelBlock:
    """All rows that share one channel: the (t, theta, phi) sub-grid of a channel."""
    model: ModelParams
    Gamma: float
    initial: InitialStateSpec
    times: Tuple[Optional[float], ...]
    inputs: Tuple[Optional[InputState], ...]
    outputs: Tuple[Output, ...]


def _coordinates(block: ChannelBlock) -> Dict[str, object]:
    m = block.model
    return {
        "variant": m.variant.value,
        "J": m.J,
        "gamma": m.gamma,
        "Jz": m.Jz,
        "D": m.D,
        "Gamma": block.Gamma,
        "family": block.initial.family.value,
        "alpha": block.initial.alpha,
    }


def _asymptotic_fidelities(spectrum: Spectrum, rho0, inputs) -> List[float]:
    rho_inf = asymptotic_state(spectrum, rho0)
    return [
        fidelity(input_density(state), teleport_output(rho_inf, rho_inf, state))
        for state in inputs
    ]


def evaluate_block(block: ChannelBlock) -> List[Dict[str, object]]:
    """
    Rows for one channel in (t, theta, phi) order.

    Both channel copies are the same state rho(t).
    """
    outputs = set(block.outputs)
    spectrum = cached_spectrum(block.model)
    rho0 = initial_density(block.initial)
    base = _coordinates(block)

    f_asymptotic: List[float] = [_NAN] * len(block.inputs)
    if Output.F_ASYMPTOTIC in outputs:
        f_asymptotic = _asymptotic_fidelities(spectrum, rho0, block.inputs)

    rows: List[Dict[str, object]] = []
    for t in block.times:
        rho = None
        c = _NAN
        if t is not None:
            rho = evolve(spectrum, rho0, EvolutionParams(Gamma=block.Gamma, t=t))
            if Output.C in outputs:
                c = concurrence(rho)

        for k, state in enumerate(block.inputs):
            row = dict(base)
            row["t"] = t if t is not None else _NAN
            row["theta"] = state.theta if state is not None else _NAN
            row["phi"] = state.phi if state is not None else _NAN
            row["C"] = c
            row["C_out"] = _NAN
            row["F"] = _NAN
            if rho is not None and state is not None and outputs & {Output.C_OUT, Output.F}:
                rho_out = teleport_output(rho, rho, state)
                if Output.C_OUT in outputs:
                    row["C_out"] = concurrence(rho_out)
                if Output.F in outputs:
                    row["F"] = fidelity(input_density(state), rho_out)
            row["F_asymptotic"] = f_asymptotic[k]
            rows.append(row)
    return rows


def evaluate_point(point: GridPoint, outputs: Iterable[Output]) -> Dict[str, object]:
    """Evaluate a single grid point; same values as the corresponding sweep row."""
    block = ChannelBlock(
        model=point.model,
        Gamma=point.Gamma,
        initial=point.initial,
        times=(point.t,),
        inputs=(point.input,),
        outputs=tuple(outputs),
    )
    return evaluate_block(block)[0]


class SweepEngine:
    """Expand a SweepConfig and evaluate it, optionally across worker processes."""

    def __init__(self, workers: int = 1, chunk_rows: int = DEFAULT_CHUNK_ROWS):
        """
        Args:
            workers: Number of worker processes; 1 evaluates in-process.
            chunk_rows: Approximate number of rows per emitted frame.
        """
        if workers < 1:
            raise ValueError(f"workers must be at least 1, got {workers}")
        if chunk_rows < 1:
            raise ValueError(f"chunk_rows must be at least 1, got {chunk_rows}")
        self.workers = workers
        self.chunk_rows = chunk_rows

    def blocks(self, cfg: SweepConfig) -> Iterator[ChannelBlock]:
        times = cfg.times()
        inputs = cfg.inputs()
        for model, Gamma, initial in cfg.channels():
            yield ChannelBlock(
                model=model,
                Gamma=Gamma,
                initial=initial,
                times=times,
                inputs=inputs,
                outputs=cfg.outputs,
            )

    def _evaluated(self, cfg: SweepConfig) -> Iterator[List[Dict[str, object]]]:
        if self.workers == 1:
            yield from map(evaluate_block, self.blocks(cfg))
            return
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            # map() yields in submission order whatever order workers finish in
            yield from pool.map(evaluate_block, self.blocks(cfg), chunksize=8)

    def iter_frames(self, cfg: SweepConfig) -> Iterator[pd.DataFrame]:
        """Row frames in grid order; always yields at least one frame."""
        buffer: List[Dict[str, object]] = []
        emitted = False
        for rows in self._evaluated(cfg):
            buffer.extend(rows)
            if len(buffer) >= self.chunk_rows:
                yield pd.DataFrame(buffer, columns=CSV_COLUMNS)
                buffer = []
                emitted = True
        if buffer or not emitted:
            yield pd.DataFrame(buffer, columns=CSV_COLUMNS)

    def run(self, cfg: SweepConfig, stream: TextIO) -> int:
        """Evaluate the grid and write CSV to ``stream``; returns the row count."""
        logger.info(
            "Sweeping %d grid points (outputs: %s, workers: %d)",
            cfg.grid_size(),
            ", ".join(o.value for o in cfg.outputs),
            self.workers,
        )
        started = time.perf_counter()
        rows = CSVReportWriter().write(self.iter_frames(cfg), stream)
        logger.info("Sweep finished: %d rows in %.2fs", rows, time.perf_counter() - started)
        return rows

    def max_decoherence_time(self, cfg: SweepConfig) -> float:
        """Largest decoherence time over the grid's couplings and rates."""
        longest = 0.0
        for model in cfg.model_params():
            spectrum = cached_spectrum(model)
            for Gamma in cfg.Gamma.points():
                longest = max(longest, decoherence_time(spectrum, Gamma))
        return longest


def run_sweep(cfg: SweepConfig, stream: TextIO, workers: int = 1) -> int:
    """One CSV row per grid point, in nesting order."""
    return SweepEngine(workers=workers).run(cfg, stream)


def asymptotic_fidelity_curve(cfg: SweepConfig, stream: TextIO, workers: int = 1) -> int:
    """
    Long-time fidelity per channel and input state.

    The time axis is dropped: the asymptotic state does not depend on t.

    Raises:
        ValueError: If F_asymptotic is not among the requested outputs.
    """
    if Output.F_ASYMPTOTIC not in cfg.outputs:
        raise ValueError("asymptotic_fidelity_curve needs F_asymptotic in outputs")
    curve = replace(cfg, time=None, outputs=(Output.F_ASYMPTOTIC,))
    return run_sweep(curve, stream, workers=workers)
