"""
Scenario Files
Strict parser and renderer for the line-oriented key = value scenario format

    # comment            ; comment
    [scenario]
    name = tg-baseline
    kind = single-run
    [solver]
    n = 32
    omega = 0
    [data]
    generator = taylor-green

Lists are comma-separated; beltrami modes are written "1 0 1, 1 1 0".
Unknown sections or keys, duplicates and type mismatches are ConfigErrors
carrying the offending line numbers.
"""

import math
import re
import typing
from typing import Any, Dict, List, Literal, Optional, Tuple, Type

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from config.settings import LabSettings, get_settings
from spectral.errors import ConfigError
from solver.settings import SolverConfig

KINDS = ("single-run", "delta-study", "rotation-sweep", "strichartz", "verify-lemmas", "uniqueness")
NAME_PATTERN = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")

GENERATOR_PARAMS = {
    "taylor-green": {"amplitude", "l2"},
    "beltrami": {"modes", "sign", "amplitude", "l2"},
    "random": {"k0", "l2", "seed"},
}


# ==================== Section models ====================

class DataSpec(BaseModel):
    """Initial-data descriptor: generator id, its parameters and the seed"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    generator: Literal["taylor-green", "beltrami", "random"] = "taylor-green"
    seed: int = Field(default=0, ge=0)
    amplitude: Optional[float] = None
    l2: Optional[float] = Field(default=None, gt=0.0)
    k0: Optional[float] = Field(default=None, gt=0.0)
    modes: Optional[List[Tuple[int, int, int]]] = None
    sign: Optional[int] = None

    @field_validator("modes", mode="before")
    @classmethod
    def _triples(cls, value: Any) -> Any:
        if isinstance(value, str):
            value = [value]
        if isinstance(value, list):
            return [tuple(int(c) for c in item.split()) if isinstance(item, str) else item for item in value]
        return value

    @field_validator("sign")
    @classmethod
    def _unit_sign(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value not in (-1, 1):
            raise ValueError(f"sign must be 1 or -1, got {value}")
        return value

    @model_validator(mode="after")
    def _applicable(self) -> "DataSpec":
        allowed = GENERATOR_PARAMS[self.generator]
        for name in ("amplitude", "l2", "k0", "modes", "sign"):
            if getattr(self, name) is not None and name not in allowed:
                raise ValueError(f"parameter {name!r} does not apply to generator {self.generator}")
        return self

    def params(self) -> Dict[str, Any]:
        """Keyword arguments for solver.initial_data.generate"""
        allowed = GENERATOR_PARAMS[self.generator]
        out = {name: getattr(self, name) for name in allowed if getattr(self, name) is not None}
        if self.modes is not None:
            out["modes"] = [tuple(m) for m in self.modes]
        return out


class DeltaStudySpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    deltas: List[float] = Field(min_length=1)
    ratio: float = Field(default=0.5, gt=0.0, le=1.0)


class SweepSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    omegas: List[float] = Field(min_length=1)
    u_threshold: float = Field(gt=0.0)
    r: float = 4.0


class StrichartzSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int = 64
    j: int = 3
    r: float = 4.0
    t_end: float = Field(default=2.0, gt=0.0)
    omegas: List[float] = [10.0, 30.0, 100.0, 300.0, 1000.0]
    width: Optional[float] = Field(default=None, gt=0.0)


class VerifySpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int = 32
    ensemble_size: int = Field(default=100, ge=1)
    seeds: List[int] = [0, 1]
    nu: float = Field(default=1.0, gt=0.0)
    include_variant_ii: bool = False


class UniquenessSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    perturbation_scale: float = Field(default=1e-8, ge=0.0)
    seed: int = Field(default=0, ge=0)


KIND_SECTIONS: Dict[str, Tuple[str, Type[BaseModel]]] = {
    "delta-study": ("delta_study", DeltaStudySpec),
    "rotation-sweep": ("rotation_sweep", SweepSpec),
    "strichartz": ("strichartz", StrichartzSpec),
    "verify-lemmas": ("verify", VerifySpec),
    "uniqueness": ("uniqueness", UniquenessSpec),
}
SECTION_MODELS: Dict[str, Type[BaseModel]] = {
    "solver": SolverConfig,
    "data": DataSpec,
    **{section: model for section, model in KIND_SECTIONS.values()},
}
SECTION_ORDER = ["scenario", "solver", "data"] + [section for section, _ in KIND_SECTIONS.values()]


class ScenarioSpec(BaseModel):
    """One fully validated experiment"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str
    kind: Literal["single-run", "delta-study", "rotation-sweep", "strichartz", "verify-lemmas", "uniqueness"]
    outputs: str
    solver: SolverConfig = Field(default_factory=SolverConfig)
    data: DataSpec = Field(default_factory=DataSpec)
    delta_study: Optional[DeltaStudySpec] = None
    rotation_sweep: Optional[SweepSpec] = None
    strichartz: Optional[StrichartzSpec] = None
    verify: Optional[VerifySpec] = None
    uniqueness: Optional[UniquenessSpec] = None

    @field_validator("name")
    @classmethod
    def _filesystem_safe(cls, value: str) -> str:
        if not NAME_PATTERN.match(value):
            raise ValueError(f"name {value!r} must be nonempty and use only letters, digits, '.', '_' or '-'")
        return value

    @model_validator(mode="after")
    def _kind_section(self) -> "ScenarioSpec":
        wanted = KIND_SECTIONS.get(self.kind, (None, None))[0]
        for section, _ in KIND_SECTIONS.values():
            present = getattr(self, section) is not None
            if present and section != wanted:
                raise ValueError(f"section [{section}] does not apply to kind {self.kind}")
            if section == wanted and not present:
                raise ValueError(f"kind {self.kind} needs a [{section}] section")
        return self

    @property
    def kind_section(self) -> Optional[BaseModel]:
        wanted = KIND_SECTIONS.get(self.kind, (None, None))[0]
        return getattr(self, wanted) if wanted else None

    def with_seed(self, seed: int) -> "ScenarioSpec":
        """Override the data seed (and the verifier seeds) as --seed does"""
        update: Dict[str, Any] = {"data": self.data.model_copy(update={"seed": seed})}
        if self.verify is not None:
            update["verify"] = self.verify.model_copy(update={"seeds": [seed, seed + 1]})
        if self.uniqueness is not None:
            update["uniqueness"] = self.uniqueness.model_copy(update={"seed": seed})
        return self.model_copy(update=update)


# ==================== Parsing ====================

class _Entry(typing.NamedTuple):
    value: str
    line: int


def _strip_comment(line: str) -> str:
    stripped = line.strip()
    if stripped.startswith(("#", ";")):
        return ""
    return re.split(r"\s[#;]", stripped, maxsplit=1)[0].strip()


def _read_sections(text: str) -> Tuple[Dict[str, Dict[str, _Entry]], Dict[str, int]]:
    sections: Dict[str, Dict[str, _Entry]] = {}
    headers: Dict[str, int] = {}
    current: Optional[str] = None

    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        header = re.fullmatch(r"\[\s*([A-Za-z_]+)\s*\]", line)
        if header:
            name = header.group(1).lower()
            if name not in SECTION_ORDER:
                raise ConfigError(f"unknown section [{name}]", lines=[number])
            if name in headers:
                raise ConfigError(f"duplicate section [{name}]", lines=[headers[name], number])
            headers[name] = number
            sections[name] = {}
            current = name
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lines=[number])
        if current is None:
            raise ConfigError("key outside any [section]", lines=[number])
        key, value = (part.strip() for part in line.split("=", 1))
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", key):
            raise ConfigError(f"malformed key {key!r}", lines=[number])
        key = key.lower()
        if key in sections[current]:
            raise ConfigError(f"duplicate key {key!r} in [{current}]", lines=[sections[current][key].line, number])
        sections[current][key] = _Entry(value, number)

    return sections, headers


def _is_list(model: Type[BaseModel], key: str) -> bool:
    field = model.model_fields.get(key)
    if field is None:
        return False
    annotation = field.annotation
    if typing.get_origin(annotation) is typing.Union:
        annotation = next(a for a in typing.get_args(annotation) if a is not type(None))
    return typing.get_origin(annotation) in (list, List)


def _convert(model: Type[BaseModel], key: str, value: str) -> Any:
    if value.lower() in ("none", "null"):
        return None
    if _is_list(model, key):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


def _validate(model: Type[BaseModel], section: str, entries: Dict[str, _Entry], header_line: Optional[int],
              defaults: Optional[Dict[str, Any]] = None) -> BaseModel:
    data = dict(defaults or {})
    data.update({key: _convert(model, key, entry.value) for key, entry in entries.items()})
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        error = exc.errors()[0]
        loc = error.get("loc", ())
        key = str(loc[0]) if loc else None
        if key in entries:
            lines = [entries[key].line]
            given = f" (got {entries[key].value!r})"
        else:
            lines = [header_line] if header_line else []
            given = ""
        if error.get("type") == "missing":
            message = f"[{section}] missing required key {key!r}"
        elif error.get("type") == "extra_forbidden":
            message = f"[{section}] unknown key {key!r}"
        else:
            where = f"{key}: " if key else ""
            message = f"[{section}] {where}{error.get('msg')}{given}"
        raise ConfigError(message, lines=lines) from None


def _section_defaults(section: str, settings: LabSettings) -> Dict[str, Any]:
    if section == "solver":
        return settings.solver_defaults.model_dump()
    if section == "strichartz":
        return settings.strichartz_defaults.model_dump()
    if section == "verify":
        return settings.verify_defaults.model_dump()
    return {}


def parse_config(text: str, settings: Optional[LabSettings] = None) -> ScenarioSpec:
    """
    Parse and validate scenario text

    Args:
        text: scenario file content
        settings: lab settings supplying defaults (cached settings when None)

    Returns:
        ScenarioSpec with every default applied

    Raises:
        ConfigError: unknown section/key, duplicate, missing required key or
            type mismatch, tagged with line numbers
    """
    settings = settings or get_settings()

    sections, headers = _read_sections(text)
    if "scenario" not in sections:
        raise ConfigError("missing [scenario] section")
    head = sections["scenario"]
    for key, entry in head.items():
        if key not in ("name", "kind", "outputs"):
            raise ConfigError(f"[scenario] unknown key {key!r}", lines=[entry.line])
    for key in ("name", "kind"):
        if key not in head:
            raise ConfigError(f"[scenario] missing required key {key!r}", lines=[headers["scenario"]])

    kind = head["kind"].value
    if kind not in KINDS:
        raise ConfigError(f"[scenario] kind must be one of {', '.join(KINDS)} (got {kind!r})", lines=[head["kind"].line])
    name = head["name"].value

    fields: Dict[str, Any] = {
        "name": name,
        "kind": kind,
        "outputs": head["outputs"].value if "outputs" in head else f"{settings.runtime.output_root}/{name}",
    }
    wanted = KIND_SECTIONS.get(kind, (None, None))[0]
    for section, model in SECTION_MODELS.items():
        present = section in sections
        if section in (s for s, _ in KIND_SECTIONS.values()) and section != wanted:
            if present:
                raise ConfigError(f"section [{section}] does not apply to kind {kind}", lines=[headers[section]])
            continue
        fields[section] = _validate(model, section, sections.get(section, {}), headers.get(section),
                                    _section_defaults(section, settings))

    try:
        return ScenarioSpec.model_validate(fields)
    except ValidationError as exc:
        error = exc.errors()[0]
        loc = error.get("loc", ())
        key = str(loc[0]) if loc else None
        line = head[key].line if key in head else headers["scenario"]
        raise ConfigError(f"[scenario] {error.get('msg')}", lines=[line]) from None


# ==================== Rendering ====================

def _format_value(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "inf" if math.isinf(value) else repr(value)
    if isinstance(value, tuple):
        return " ".join(str(v) for v in value)
    if isinstance(value, list):
        return ", ".join(_format_value(v) for v in value)
    return str(value)


def render_scenario(spec: ScenarioSpec) -> str:
    """Render every field, defaults included, in the scenario format"""
    lines = [
        f"# scenario {spec.name} ({spec.kind}), all defaults expanded",
        "[scenario]",
        f"name = {spec.name}",
        f"kind = {spec.kind}",
        f"outputs = {spec.outputs}",
    ]
    for section in SECTION_ORDER[1:]:
        model = getattr(spec, section)
        if model is None:
            continue
        lines.append("")
        lines.append(f"[{section}]")
        for key, value in model.model_dump().items():
            if section == "data" and value is None:
                continue
            lines.append(f"{key} = {_format_value(value)}")
    return "\n".join(lines) + "\n"


def load_scenario(path, settings: Optional[LabSettings] = None) -> ScenarioSpec:
    """Read and parse a scenario file"""
    with open(path, "r", encoding="utf-8") as f:
        return parse_config(f.read(), settings)
