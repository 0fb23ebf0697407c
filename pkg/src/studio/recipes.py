"""
Named figure recipes.

Each recipe bakes the parameters of one figure panel into a
SweepConfig. Quantities a panel leaves unspecified are filled from the
defaults below and reported by ``recipe_assumptions`` so they can be
stamped into run metadata.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from src.engine.models import Family, Variant
from src.studio.config import Axis, Output, SweepConfig

logger = logging.getLogger(__name__)

GAMMA_RATE = 0.02

TIME_AXIS = Axis.range(0.0, 30.0, 301)
COUPLING_AXIS = Axis.range(-3.0, 3.0, 61)
ANISOTROPY_AXIS = Axis.range(0.0, 1.0, 51)
DM_AXIS = Axis.range(0.0, 3.0, 61)
ALPHA_PANELS = Axis.of([math.pi / 2, math.pi / 3, math.pi / 4, math.pi / 8])
THETA_PANELS = Axis.of([math.pi / 2, math.pi / 3, math.pi / 4, math.pi / 6])
ASYMPTOTIC_THETA_PANELS = Axis.of([0.0, math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2])
ALPHA_HALF_TURN = Axis.range(0.0, math.pi, 61)
ALPHA_FULL_TURN = Axis.range(0.0, 2 * math.pi, 121)

_TIME_NOTE = "t in [0, 30] with 301 points"
_ALPHA_PANEL_NOTE = "alpha panels {pi/2, pi/3, pi/4, pi/8}"
_THETA_PANEL_NOTE = "theta panels {pi/2, pi/3, pi/4, pi/6}"


@dataclass(frozen=True)
class FigureRecipe:
    name: str
    description: str
    config: SweepConfig
    assumptions: Dict[str, str] = field(default_factory=dict)


def _config(
    variant: Tuple[Variant, ...],
    J: Axis,
    gamma: Axis,
    Jz: Axis,
    D: Axis,
    family: Tuple[Family, ...],
    alpha: Axis,
    outputs: Tuple[Output, ...],
    time: Optional[Axis] = TIME_AXIS,
    theta: Optional[Axis] = None,
) -> SweepConfig:
    return SweepConfig(
        variant=variant,
        J=J,
        gamma=gamma,
        Jz=Jz,
        D=D,
        Gamma=Axis.scalar(GAMMA_RATE),
        family=family,
        alpha=alpha,
        time=time,
        theta=theta,
        phi=Axis.scalar(0.0) if theta is not None else None,
        outputs=outputs,
    )


def _concurrence_pair(number: int, description: str, sweep_note: str, **axes: Axis) -> List[FigureRecipe]:
    """Panels (a) Dz and (b) Dx of a concurrence-versus-(parameter, t) figure."""
    recipes = []
    for suffix, variant in (("a", Variant.DZ), ("b", Variant.DX)):
        recipes.append(FigureRecipe(
            name=f"fig{number}{suffix}",
            description=f"{description} ({variant.value})",
            config=_config(
                variant=(variant,),
                family=(Family.ANTIPARALLEL,),
                alpha=ALPHA_PANELS,
                outputs=(Output.C,),
                **axes,
            ),
            assumptions={"time": _TIME_NOTE, "alpha": _ALPHA_PANEL_NOTE, "sweep": sweep_note},
        ))
    return recipes


def _build_catalog() -> Dict[str, FigureRecipe]:
    recipes: List[FigureRecipe] = []

    recipes += _concurrence_pair(
        1, "Concurrence versus J and t", "J in [-3, 3] with 61 points",
        J=COUPLING_AXIS, gamma=Axis.scalar(0.2), Jz=Axis.scalar(1.0), D=Axis.scalar(2.0),
    )
    recipes += _concurrence_pair(
        2, "Concurrence versus gamma and t", "gamma in [0, 1] with 51 points",
        J=Axis.scalar(1.0), gamma=ANISOTROPY_AXIS, Jz=Axis.scalar(1.0), D=Axis.scalar(2.0),
    )
    recipes += _concurrence_pair(
        3, "Concurrence versus Jz and t", "Jz in [-3, 3] with 61 points",
        J=Axis.scalar(1.0), gamma=Axis.scalar(0.5), Jz=COUPLING_AXIS, D=Axis.scalar(2.0),
    )
    recipes += _concurrence_pair(
        4, "Concurrence versus D and t", "D in [0, 3] with 61 points",
        J=Axis.scalar(1.0), gamma=Axis.scalar(0.6), Jz=Axis.scalar(1.5), D=DM_AXIS,
    )

    for suffix, family in (("a", Family.ANTIPARALLEL), ("b", Family.PARALLEL)):
        recipes.append(FigureRecipe(
            name=f"fig5{suffix}",
            description=f"Concurrence versus alpha and t (Dz, {family.value})",
            config=_config(
                variant=(Variant.DZ,),
                J=Axis.scalar(1.0), gamma=Axis.scalar(0.2), Jz=Axis.scalar(2.0), D=Axis.scalar(0.5),
                family=(family,), alpha=ALPHA_HALF_TURN, outputs=(Output.C,),
            ),
            assumptions={"time": _TIME_NOTE, "alpha": "alpha in [0, pi] with 61 points"},
        ))

    for suffix, family in (("a", Family.ANTIPARALLEL), ("b", Family.PARALLEL)):
        recipes.append(FigureRecipe(
            name=f"fig6{suffix}",
            description=f"Concurrence versus alpha and t (Dx, {family.value})",
            config=_config(
                variant=(Variant.DX,),
                J=Axis.of([1.0, -1.0]), gamma=Axis.scalar(0.2), Jz=Axis.of([2.0, -2.0]),
                D=Axis.scalar(0.5),
                family=(family,), alpha=ALPHA_FULL_TURN, outputs=(Output.C,),
            ),
            assumptions={
                "time": _TIME_NOTE,
                "alpha": "alpha in [0, 2 pi] with 121 points",
                "couplings": "J and Jz unspecified; panels J = +/-1, Jz = +/-2",
            },
        ))

    for suffix, family in (("a", Family.ANTIPARALLEL), ("b", Family.PARALLEL)):
        recipes.append(FigureRecipe(
            name=f"fig7{suffix}",
            description=f"Output concurrence versus alpha and t (Dz, {family.value})",
            config=_config(
                variant=(Variant.DZ,),
                J=Axis.scalar(1.0), gamma=Axis.scalar(0.2), Jz=Axis.scalar(2.0), D=Axis.scalar(0.5),
                family=(family,), alpha=ALPHA_HALF_TURN, outputs=(Output.C_OUT,),
                theta=THETA_PANELS,
            ),
            assumptions={
                "time": _TIME_NOTE,
                "alpha": "alpha in [0, pi] with 61 points",
                "theta": _THETA_PANEL_NOTE,
            },
        ))

    for suffix, Jz in (("a", 2.0), ("b", -2.0)):
        recipes.append(FigureRecipe(
            name=f"fig8{suffix}",
            description=f"Output concurrence versus alpha and t (Dx, Jz = {Jz:g})",
            config=_config(
                variant=(Variant.DX,),
                J=Axis.scalar(1.0), gamma=Axis.scalar(0.2), Jz=Axis.scalar(Jz), D=Axis.scalar(0.5),
                family=(Family.ANTIPARALLEL,), alpha=ALPHA_FULL_TURN, outputs=(Output.C_OUT,),
                theta=THETA_PANELS,
            ),
            assumptions={
                "time": _TIME_NOTE,
                "alpha": "alpha in [0, 2 pi] with 121 points",
                "theta": _THETA_PANEL_NOTE,
            },
        ))

    recipes.append(FigureRecipe(
        name="fig9",
        description="Fidelity versus t, Dz against Dx",
        config=_config(
            variant=(Variant.DZ, Variant.DX),
            J=Axis.scalar(1.0), gamma=Axis.scalar(0.4), Jz=Axis.scalar(0.5), D=Axis.scalar(2.0),
            family=(Family.ANTIPARALLEL,), alpha=ALPHA_PANELS, outputs=(Output.F,),
            theta=THETA_PANELS,
        ),
        assumptions={"time": _TIME_NOTE, "alpha": _ALPHA_PANEL_NOTE, "theta": _THETA_PANEL_NOTE},
    ))

    for suffix, variant, alpha, note in (
        ("a", Variant.DZ, ALPHA_HALF_TURN, "alpha in [0, pi] with 61 points"),
        ("b", Variant.DX, ALPHA_FULL_TURN, "alpha in [0, 2 pi] with 121 points"),
    ):
        recipes.append(FigureRecipe(
            name=f"fig10{suffix}",
            description=f"Asymptotic fidelity versus alpha ({variant.value})",
            config=_config(
                variant=(variant,),
                J=Axis.scalar(1.0), gamma=Axis.scalar(0.8), Jz=Axis.scalar(2.0), D=Axis.scalar(2.0),
                family=(Family.ANTIPARALLEL,), alpha=alpha, outputs=(Output.F_ASYMPTOTIC,),
                time=None, theta=ASYMPTOTIC_THETA_PANELS,
            ),
            assumptions={"alpha": note, "theta": "theta panels {0, pi/6, pi/4, pi/3, pi/2}"},
        ))

    recipes.append(FigureRecipe(
        name="fig11",
        description="Asymptotic fidelity versus alpha, parallel initial states, Dz against Dx",
        config=_config(
            variant=(Variant.DZ, Variant.DX),
            J=Axis.scalar(1.0), gamma=Axis.scalar(0.1), Jz=Axis.scalar(3.0), D=Axis.scalar(2.0),
            family=(Family.PARALLEL,), alpha=ALPHA_HALF_TURN, outputs=(Output.F_ASYMPTOTIC,),
            time=None, theta=ASYMPTOTIC_THETA_PANELS,
        ),
        assumptions={
            "alpha": "alpha in [0, pi] with 61 points",
            "theta": "theta panels {0, pi/6, pi/4, pi/3, pi/2}",
        },
    ))

    return {recipe.name: recipe for recipe in recipes}


_CATALOG = _build_catalog()


def list_recipes() -> List[str]:
    """Recipe names in catalog order."""
    return list(_CATALOG)


def get_recipe(name: str) -> FigureRecipe:
    """
    Look up a recipe by name.

    Raises:
        ValueError: If the name is not in the catalog.
    """
    try:
        return _CATALOG[name]
    except KeyError:
        raise ValueError(
            f"Unknown figure recipe: {name!r}. Available: {', '.join(_CATALOG)}"
        ) from None


def figure_recipe(name: str) -> SweepConfig:
    """The baked SweepConfig of a named figure."""
    recipe = get_recipe(name)
    logger.debug("Resolved recipe %s: %s", name, recipe.description)
    return recipe.config


def recipe_assumptions(name: str) -> Dict[str, str]:
    """Values a panel leaves unspecified, as stamped into run metadata."""
    return dict(get_recipe(name).assumptions)
