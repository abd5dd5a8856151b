"""Technique registry: one descriptor plus engine function per technique.

The descriptors carry the parameter schemas that drive both CLI options
and the console's generated forms; engines are uniform callables so new
techniques plug in without touching the repository or the service.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from datetime import datetime
from typing import Callable, Mapping, Optional

from .connector import connectorize, derive_keys
from .errors import ParameterInvalid, UnknownTechnique
from .ela import write_ela
from .model import EventLog
from .roles import ROLE_TECHNIQUES, RoleAnonConfig, anonymize_roles
from .tlkc import BACKGROUND_TYPES, GRANULARITY_MS, MAX_L, TLKCConfig, apply_tlkc
from .xes import write_xes


@dataclass(frozen=True)
class ParameterSpec:
    name: str
    type: str  # "string" | "int" | "float" | "enum"
    default: object = None
    required: bool = False
    minimum: Optional[float] = None
    maximum: Optional[float] = None
    choices: Optional[tuple[str, ...]] = None

    def to_dict(self) -> dict:
        spec: dict = {"name": self.name, "type": self.type, "default": self.default, "required": self.required}
        if self.minimum is not None:
            spec["minimum"] = self.minimum
        if self.maximum is not None:
            spec["maximum"] = self.maximum
        if self.choices is not None:
            spec["choices"] = list(self.choices)
        return spec


@dataclass(frozen=True)
class TechniqueDescriptor:
    name: str
    input_kind: str
    output_kind: str
    parameters: tuple[ParameterSpec, ...]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "input_kind": self.input_kind,
            "output_kind": self.output_kind,
            "parameters": [p.to_dict() for p in self.parameters],
        }


@dataclass(frozen=True)
class EngineResult:
    """What an engine hands back to the repository."""

    data: bytes
    kind: str
    op_count: int
    report: dict


Engine = Callable[[EventLog, Mapping[str, object], datetime], EngineResult]


def _coerce(spec: ParameterSpec, raw: object) -> object:
    try:
        if spec.type == "int":
            if isinstance(raw, bool):
                raise ValueError("boolean is not an integer")
            value = int(raw)
        elif spec.type == "float":
            if isinstance(raw, bool):
                raise ValueError("boolean is not a number")
            value = float(raw)
        elif spec.type == "enum":
            value = str(raw)
            if value not in (spec.choices or ()):
                raise ValueError(f"must be one of {spec.choices}")
        else:
            value = str(raw)
    except (TypeError, ValueError) as exc:
        raise ParameterInvalid(f"parameter {spec.name!r}: {exc}") from exc
    if spec.minimum is not None and value < spec.minimum:
        raise ParameterInvalid(f"parameter {spec.name!r} must be >= {spec.minimum}, got {value}")
    if spec.maximum is not None and value > spec.maximum:
        raise ParameterInvalid(f"parameter {spec.name!r} must be <= {spec.maximum}, got {value}")
    if spec.type == "string" and spec.required and not value:
        raise ParameterInvalid(f"parameter {spec.name!r} must be non-empty")
    return value


def validate_parameters(descriptor: TechniqueDescriptor, values: Mapping[str, object]) -> dict:
    """Coerce and range-check user-supplied parameters against the schema."""
    known = {spec.name: spec for spec in descriptor.parameters}
    unknown = set(values) - set(known)
    if unknown:
        raise ParameterInvalid(f"unknown parameters for {descriptor.name}: {sorted(unknown)}")
    out = {}
    for name, spec in known.items():
        if name in values and values[name] is not None:
            out[name] = _coerce(spec, values[name])
        elif spec.required:
            raise ParameterInvalid(f"parameter {name!r} is required")
        else:
            out[name] = spec.default
    return out


# ---------------------------------------------------------------------------
# engines

def _run_role_decomposition(log: EventLog, params: Mapping[str, object], created_at: datetime) -> EngineResult:
    config = RoleAnonConfig(
        technique=params["technique"],
        similarity_threshold=params["similarity_threshold"],
        selective_min_group_size=params["selective_min_group_size"],
        rng_seed=params["rng_seed"],
    )
    result, report = anonymize_roles(log, config, created_at=created_at)
    return EngineResult(
        data=write_xes(result),
        kind="xes",
        op_count=len(result.metadata),
        report=report.to_dict(),
    )


def _run_connector(log: EventLog, params: Mapping[str, object], created_at: datetime) -> EngineResult:
    keys = derive_keys(str(params["passphrase"]))
    doc = connectorize(log, keys, rng=random.SystemRandom(), created_at=created_at)
    return EngineResult(
        data=write_ela(doc),
        kind="ela",
        op_count=len(doc.metadata),
        report={"records": len(doc.payload.records)},
    )


def _run_tlkc(log: EventLog, params: Mapping[str, object], created_at: datetime) -> EngineResult:
    config = TLKCConfig(
        T=params["T"],
        L=params["L"],
        K=params["K"],
        C=params["C"],
        background=params["background"],
        sensitive_attribute=params["sensitive_attribute"] or None,
    )
    result, report = apply_tlkc(log, config, created_at=created_at)
    return EngineResult(
        data=write_xes(result),
        kind="xes",
        op_count=len(result.metadata),
        report=report.to_dict(),
    )


_REGISTRY: dict[str, tuple[TechniqueDescriptor, Engine]] = {
    "role-decomposition": (
        TechniqueDescriptor(
            name="role-decomposition",
            input_kind="xes",
            output_kind="xes",
            parameters=(
                ParameterSpec("technique", "enum", default="fixed_value", choices=ROLE_TECHNIQUES),
                ParameterSpec("similarity_threshold", "float", default=0.7, minimum=0.0, maximum=1.0),
                ParameterSpec("selective_min_group_size", "int", default=2, minimum=1),
                ParameterSpec("rng_seed", "int", default=0),
            ),
        ),
        _run_role_decomposition,
    ),
    "connector": (
        TechniqueDescriptor(
            name="connector",
            input_kind="xes",
            output_kind="ela",
            parameters=(ParameterSpec("passphrase", "string", required=True),),
        ),
        _run_connector,
    ),
    "tlkc": (
        TechniqueDescriptor(
            name="tlkc",
            input_kind="xes",
            output_kind="xes",
            parameters=(
                ParameterSpec("T", "enum", default="hours", choices=tuple(GRANULARITY_MS)),
                ParameterSpec("L", "int", default=2, minimum=1, maximum=MAX_L),
                ParameterSpec("K", "int", default=2, minimum=1),
                ParameterSpec("C", "float", default=1.0, minimum=0.0, maximum=1.0),
                ParameterSpec("background", "enum", default="sequence", choices=BACKGROUND_TYPES),
                ParameterSpec("sensitive_attribute", "string", default=None),
            ),
        ),
        _run_tlkc,
    ),
}


def list_techniques() -> list[TechniqueDescriptor]:
    return [descriptor for descriptor, _ in _REGISTRY.values()]


def get_technique(name: str) -> tuple[TechniqueDescriptor, Engine]:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UnknownTechnique(f"unknown technique {name!r}") from None
