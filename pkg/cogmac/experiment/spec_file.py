from __future__ import annotations
import os
from enum import Enum
import tomlkit
from tomlkit import TOMLDocument
from tomlkit.exceptions import ParseError
from tomlkit.items import AoT, Table
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from cogmac.sim import *

# Functions to work with experiment config files.
# Utilizes https://github.com/sdispater/tomlkit to work with TOML data.
#
# A config file is a flat list of key = value pairs; any SimConfig field plus the
# experiment keys below. No tables.
# --------------------------
# lambda1 = 0.05
# gamma1 = 0.04
# windows = [4, 6, 8, 10]
# sweep_lambda1 = [0.01, 0.03, 0.05, 0.07, 0.1]
# policies = ["qlearning", "uniform", "gridsearch"]
# horizon_slots = 200000
# replications = 5
# output_dir = "out"
# --------------------------

class PolicyName(str, Enum):
    QLEARNING = "qlearning"
    UNIFORM = "uniform"
    GRIDSEARCH = "gridsearch"
    SILENT = "silent"

POLICY_ORDER = [PolicyName.QLEARNING, PolicyName.UNIFORM, PolicyName.GRIDSEARCH, PolicyName.SILENT]

class ExperimentSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    base:SimConfig = Field(default_factory=SimConfig)
    sweep_lambda1:tuple[float, ...]
    policies:tuple[PolicyName, ...] = (PolicyName.QLEARNING, PolicyName.UNIFORM, PolicyName.GRIDSEARCH)
    horizon_slots:int = Field(default=200_000, ge=1)
    replications:int = Field(default=5, ge=1)
    output_dir:str = "out"
    workers:int = Field(default=1, ge=1)
    grid_step:float = Field(default=0.1, gt=0.0, le=1.0)
    grid_eval_slots:int = Field(default=100_000, ge=1)

    @field_validator("sweep_lambda1")
    @classmethod
    def _check_sweep(cls, sweep:tuple[float, ...]) -> tuple[float, ...]:
        if len(sweep) == 0:
            raise ValueError("sweep_lambda1 must not be empty.")
        if any(lam < 0.0 for lam in sweep):
            raise ValueError(f"all lambda1 values must be >= 0, got {list(sweep)}.")
        return sweep

    @field_validator("policies")
    @classmethod
    def _check_policies(cls, policies:tuple[PolicyName, ...]) -> tuple[PolicyName, ...]:
        if len(policies) == 0:
            raise ValueError("at least one policy is required.")
        # canonical order keeps summary rows ordered by (lambda1, policy, replication)
        return tuple(p for p in POLICY_ORDER if p in policies)


EXPERIMENT_KEYS = [k for k in ExperimentSpec.model_fields.keys() if k != "base"]

def valid_keys() -> list[str]:
    return config_fields() + EXPERIMENT_KEYS

def load_values(toml_file_path:str) -> dict:
    doc = _read_toml_file(toml_file_path)
    return loads_values(doc)

def loads_values(toml:str|TOMLDocument) -> dict:
    if(isinstance(toml, str)):
        doc = _read_toml_string(toml)
    else:
        doc = toml
    _validate_doc(doc)
    return doc.unwrap()

def build_config(values:dict, overrides:dict|None=None) -> SimConfig:
    """SimConfig from file values; overrides (CLI flags) win."""
    merged = {k: v for k, v in values.items() if k in config_fields()}
    if overrides:
        merged.update({k: v for k, v in overrides.items() if k in config_fields() and v is not None})
    return make_config(**merged)

def build_experiment_spec(values:dict, overrides:dict|None=None) -> ExperimentSpec:
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    base = build_config(values, overrides)
    experiment = {k: v for k, v in values.items() if k in EXPERIMENT_KEYS}
    experiment.update({k: v for k, v in overrides.items() if k in EXPERIMENT_KEYS})
    if "sweep_lambda1" not in experiment:
        experiment["sweep_lambda1"] = (base.lambda1,)
    try:
        return ExperimentSpec(base=base, **experiment)
    except ValidationError as e:
        raise InvalidConfigError(str(e)) from e

def load_experiment_spec(toml_file_path:str, overrides:dict|None=None) -> ExperimentSpec:
    return build_experiment_spec(load_values(toml_file_path), overrides)

def dumps_experiment_spec(spec:ExperimentSpec) -> str:
    doc = tomlkit.document()
    doc.add(tomlkit.comment("cogmac experiment config: flat key = value pairs, CLI flags override them"))
    for key, value in spec.base.model_dump(mode="json").items():
        doc.add(key, value)
    for key, value in spec.model_dump(mode="json", exclude={"base"}).items():
        doc.add(key, value)
    return doc.as_string()

def write_experiment_spec(toml_file_path:str, spec:ExperimentSpec):
    toml_file_path = _convert_posix_to_win(toml_file_path)
    with open(toml_file_path, 'w') as f:
        f.write(dumps_experiment_spec(spec))


def _read_toml_file(file_path) -> TOMLDocument:
    file_path = _convert_posix_to_win(file_path)
    if not os.path.exists(file_path):
        raise InvalidConfigError(f"config file '{file_path}' does not exist.")
    with open(file_path, 'r') as f:
        return _read_toml_string(f.read())

def _read_toml_string(toml_string) -> TOMLDocument:
    try:
        return tomlkit.loads(toml_string)
    except ParseError as e:
        raise InvalidConfigError(f"malformed config: {e}") from e

def _validate_doc(doc:TOMLDocument) -> None:
    keys = valid_keys()
    for key, value in doc.items():
        if key not in keys:
            raise InvalidConfigError(f"Invalid key '{key}'. Valid keys are '{keys}'.")
        if isinstance(value, (Table, AoT)):
            raise InvalidConfigError(f"Key '{key}' is a table. Config files only hold flat key = value pairs.")

def _convert_posix_to_win(path:str) -> str:
    if os.name == "nt" and "/" in path:
        return path.replace("/", os.sep)
    return path
