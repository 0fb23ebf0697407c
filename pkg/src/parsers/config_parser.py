"""JSON sweep-configuration parser."""

import json
import logging
from numbers import Real
from pathlib import Path
from typing import Any, Dict, List, Tuple, Type, TypeVar

from src.engine.models import Family, Variant
from src.reports.csv_report import read_metadata
from src.studio.config import DEFAULT_MAX_POINTS, Axis, AxisKind, Output, SweepConfig

logger = logging.getLogger(__name__)

E = TypeVar("E", Variant, Family)


class ConfigError(ValueError):
    """A sweep configuration document is malformed."""


class ConfigParser:
    """Parse JSON sweep configurations into SweepConfig objects and back."""

    REQUIRED_KEYS = ["model", "Gamma", "initial", "outputs"]
    MODEL_KEYS = ["variant", "J", "gamma", "Jz", "D"]
    INITIAL_KEYS = ["family", "alpha"]
    INPUT_KEYS = ["theta", "phi"]
    RANGE_KEYS = {"start", "stop", "count"}

    def parse(self, file_path: str | Path) -> SweepConfig:
        """
        Parse a sweep configuration file.

        Args:
            file_path: Path to a .json configuration, or the .meta sidecar of
                an earlier run, whose recorded config is replayed.

        Returns:
            The validated SweepConfig.

        Raises:
            FileNotFoundError: If the file doesn't exist.
            ConfigError: If the document is malformed or describes an invalid grid.
        """
        file_path = Path(file_path)

        if not file_path.exists():
            raise FileNotFoundError(f"File not found: {file_path}")

        suffix = file_path.suffix.lower()
        if suffix == ".json":
            text = file_path.read_text(encoding="utf-8")
        elif suffix == ".meta":
            text = self._recorded_config(file_path)
        else:
            raise ConfigError(f"Unsupported file format: {suffix}. Use .json or a .meta sidecar")

        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Invalid JSON in {file_path}: {e}") from e

        cfg = self.parse_dict(document)
        logger.info("Loaded sweep config %s (%d grid points)", file_path, cfg.grid_size())
        return cfg

    def _recorded_config(self, meta_path: Path) -> str:
        try:
            entries = read_metadata(meta_path)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        if "config" not in entries:
            raise ConfigError(f"No recorded config in {meta_path}")
        return entries["config"]

    def parse_dict(self, document: Dict[str, Any]) -> SweepConfig:
        """Build a SweepConfig from an already-decoded document."""
        if not isinstance(document, dict):
            raise ConfigError("A sweep configuration must be a JSON object")
        self._require_keys(document, self.REQUIRED_KEYS, "config")

        model = self._section(document, "model", self.MODEL_KEYS)
        initial = self._section(document, "initial", self.INITIAL_KEYS)
        state = None
        if "input" in document:
            state = self._section(document, "input", self.INPUT_KEYS)

        try:
            return SweepConfig(
                variant=self._parse_choices(model["variant"], Variant, "model.variant"),
                J=self._parse_axis(model["J"], "model.J"),
                gamma=self._parse_axis(model["gamma"], "model.gamma"),
                Jz=self._parse_axis(model["Jz"], "model.Jz"),
                D=self._parse_axis(model["D"], "model.D"),
                Gamma=self._parse_axis(document["Gamma"], "Gamma"),
                family=self._parse_choices(initial["family"], Family, "initial.family"),
                alpha=self._parse_axis(initial["alpha"], "initial.alpha"),
                time=self._parse_axis(document["time"], "time") if "time" in document else None,
                theta=self._parse_axis(state["theta"], "input.theta") if state else None,
                phi=self._parse_axis(state["phi"], "input.phi") if state else None,
                outputs=self._parse_outputs(document["outputs"]),
                max_points=self._parse_max_points(document.get("max_points", DEFAULT_MAX_POINTS)),
            )
        except ConfigError:
            raise
        except ValueError as e:
            raise ConfigError(str(e)) from e

    def dump(self, cfg: SweepConfig) -> Dict[str, Any]:
        """Canonical document for a SweepConfig; parse_dict(dump(cfg)) == cfg."""
        document: Dict[str, Any] = {
            "model": {
                "variant": self._dump_choices(cfg.variant),
                "J": self._dump_axis(cfg.J),
                "gamma": self._dump_axis(cfg.gamma),
                "Jz": self._dump_axis(cfg.Jz),
                "D": self._dump_axis(cfg.D),
            },
            "Gamma": self._dump_axis(cfg.Gamma),
            "initial": {
                "family": self._dump_choices(cfg.family),
                "alpha": self._dump_axis(cfg.alpha),
            },
        }
        if cfg.time is not None:
            document["time"] = self._dump_axis(cfg.time)
        if cfg.has_input:
            document["input"] = {
                "theta": self._dump_axis(cfg.theta),
                "phi": self._dump_axis(cfg.phi),
            }
        document["outputs"] = [o.value for o in cfg.outputs]
        if cfg.max_points != DEFAULT_MAX_POINTS:
            document["max_points"] = cfg.max_points
        return document

    def dumps(self, cfg: SweepConfig) -> str:
        return json.dumps(self.dump(cfg), indent=2)

    def _require_keys(self, section: Dict[str, Any], keys: List[str], where: str) -> None:
        missing = [key for key in keys if key not in section]
        if missing:
            available = ", ".join(section.keys()) or "(none)"
            raise ConfigError(
                f"Missing required keys in {where}: {', '.join(missing)}. "
                f"Available keys: {available}"
            )

    def _section(self, document: Dict[str, Any], name: str, keys: List[str]) -> Dict[str, Any]:
        section = document[name]
        if not isinstance(section, dict):
            raise ConfigError(f"'{name}' must be an object, got {type(section).__name__}")
        self._require_keys(section, keys, name)
        return section

    def _parse_number(self, value: Any, where: str) -> float:
        # bool is an int subclass; reject it explicitly
        if isinstance(value, bool) or not isinstance(value, Real):
            raise ConfigError(f"{where}: expected a number, got {value!r}")
        return float(value)

    def _parse_axis(self, value: Any, where: str) -> Axis:
        """Scalar, explicit list, or {start, stop, count} range."""
        if isinstance(value, dict):
            keys = set(value)
            if keys != self.RANGE_KEYS:
                raise ConfigError(
                    f"{where}: a range needs exactly start, stop and count, got {sorted(keys)}"
                )
            count = value["count"]
            if isinstance(count, bool) or not isinstance(count, int):
                raise ConfigError(f"{where}: range count must be an integer, got {count!r}")
            return Axis.range(
                self._parse_number(value["start"], where),
                self._parse_number(value["stop"], where),
                count,
            )
        if isinstance(value, list):
            return Axis.of([self._parse_number(v, where) for v in value])
        return Axis.scalar(self._parse_number(value, where))

    def _dump_axis(self, axis: Axis) -> Any:
        if axis.kind is AxisKind.RANGE:
            return {"start": axis.start, "stop": axis.stop, "count": axis.count}
        if axis.kind is AxisKind.LIST:
            return list(axis.values)
        return axis.values[0]

    def _parse_choices(self, value: Any, enum: Type[E], where: str) -> Tuple[E, ...]:
        raw = value if isinstance(value, list) else [value]
        allowed = {member.value: member for member in enum}
        choices = []
        for item in raw:
            if not isinstance(item, str) or item not in allowed:
                raise ConfigError(
                    f"{where}: unknown value {item!r}. Expected one of: {', '.join(allowed)}"
                )
            choices.append(allowed[item])
        return tuple(choices)

    def _dump_choices(self, choices: Tuple[Any, ...]) -> Any:
        if len(choices) == 1:
            return choices[0].value
        return [choice.value for choice in choices]

    def _parse_outputs(self, value: Any) -> Tuple[Output, ...]:
        if not isinstance(value, list):
            raise ConfigError(f"outputs must be a list, got {value!r}")
        allowed = {o.value: o for o in Output}
        outputs = []
        for item in value:
            if not isinstance(item, str) or item not in allowed:
                raise ConfigError(
                    f"Unknown output {item!r}. Expected one of: {', '.join(allowed)}"
                )
            outputs.append(allowed[item])
        return tuple(outputs)

    def _parse_max_points(self, value: Any) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"max_points must be an integer, got {value!r}")
        return value
