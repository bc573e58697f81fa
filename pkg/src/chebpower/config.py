"""Experiment configuration: JSON/TOML parsing, validation with enumerated
error messages, and construction of the model/filter/oracle/engine stack."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - version-dependent import
    import tomli as tomllib

from .chebyshev import FilterSpec, bounds_from_fractions, normalization_C
from .engine import StepSchedule, random_state, uniform_state
from .models import (
    DENSE_QUBIT_CAP,
    SpectralReference,
    build_hubbard_jw,
    build_tfim,
    build_xxz,
    exact_reference,
)
from .oracle import (
    ElementCache,
    ExactOracle,
    HadamardBlockOracle,
    REGIMES,
    TrotterFourierOracle,
)
from .pauli import PauliHamiltonian

MODEL_NAMES = ("tfim", "xxz", "hubbard")


class ConfigError(ValueError):
    """Carries every problem found in one pass."""

    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("invalid config:\n" + "\n".join(f"  - {p}" for p in problems))


@dataclass
class ExperimentConfig:
    model: dict[str, Any]
    filter: dict[str, Any]
    oracle: dict[str, Any]
    engine: dict[str, Any]
    replicas: int = 1
    seed: int = 0
    sweep: dict[str, Any] | None = None
    output_dir: str = "out"

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "ExperimentConfig":
        problems: list[str] = []
        for block in ("model", "filter", "oracle", "engine"):
            if block not in raw:
                problems.append(f"missing block '{block}'")
        if problems:
            raise ConfigError(problems)

        model = dict(raw["model"])
        name = model.get("name")
        if name not in MODEL_NAMES:
            problems.append(f"model.name must be one of {MODEL_NAMES}, got {name!r}")
        elif name == "hubbard":
            if "sites" not in model:
                problems.append("hubbard model needs 'sites'")
        elif "n" not in model:
            problems.append(f"{name} model needs qubit count 'n'")

        filt = dict(raw["filter"])
        has_fracs = "f_ub" in filt and "f_lb" in filt
        has_bounds = "lambda_lb" in filt and "lambda_ub" in filt
        if not (has_fracs or has_bounds):
            problems.append("filter needs either {f_ub, f_lb} or {lambda_lb, lambda_ub}")
        if "degree" not in filt:
            problems.append("filter needs 'degree'")

        oracle = dict(raw["oracle"])
        regime = oracle.get("regime", "exact")
        if regime not in REGIMES:
            problems.append(f"oracle.regime must be one of {REGIMES}, got {regime!r}")
        oracle["regime"] = regime

        engine = dict(raw["engine"])
        for key in ("m_r", "m_c", "iterations"):
            if key not in engine:
                problems.append(f"engine needs '{key}'")

        sweep = raw.get("sweep")
        if sweep is not None:
            if "parameter" not in sweep or "values" not in sweep:
                problems.append("sweep needs 'parameter' and explicit 'values'")
            elif sweep["parameter"] not in model and sweep["parameter"] != "shots":
                problems.append(
                    f"sweep parameter {sweep['parameter']!r} is not a model field or 'shots'"
                )

        replicas = int(raw.get("replicas", 1))
        if replicas < 1:
            problems.append("replicas must be >= 1")

        if problems:
            raise ConfigError(problems)
        return cls(
            model=model,
            filter=filt,
            oracle=oracle,
            engine=engine,
            replicas=replicas,
            seed=int(raw.get("seed", 0)),
            sweep=dict(sweep) if sweep else None,
            output_dir=str(raw.get("output_dir", "out")),
        )

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        path = Path(path)
        text = path.read_bytes()
        if path.suffix.lower() == ".toml":
            raw = tomllib.loads(text.decode())
        else:
            raw = json.loads(text)
        return cls.from_dict(raw)

    def sweep_points(self) -> list[tuple[str, Any]]:
        """(label, model/oracle override value) pairs; a single unnamed point
        when no sweep is configured."""
        if self.sweep is None:
            return [("point", None)]
        param = self.sweep["parameter"]
        return [(f"{param}={v:g}", v) for v in self.sweep["values"]]

    def model_for(self, sweep_value: Any = None) -> PauliHamiltonian:
        params = dict(self.model)
        if self.sweep is not None and sweep_value is not None:
            if self.sweep["parameter"] != "shots":
                params[self.sweep["parameter"]] = sweep_value
        name = params["name"]
        if name == "tfim":
            return build_tfim(int(params["n"]), float(params.get("J", 1.0)), float(params.get("D", 1.0)))
        if name == "xxz":
            return build_xxz(int(params["n"]), float(params.get("J", 1.0)), float(params.get("D", 1.0)))
        return build_hubbard_jw(
            int(params["sites"]), float(params.get("t", 1.0)), float(params.get("U", 1.0))
        )


@dataclass
class ExperimentStack:
    """Everything one sweep point needs, built deterministically from config."""

    H: PauliHamiltonian
    ref: SpectralReference | None
    spec: FilterSpec
    C: float
    cache: ElementCache
    schedule: StepSchedule
    m_r: int
    m_c: int
    iterations: int
    renorm_period: int
    initial_state: np.ndarray
    replicas: int
    seed: int


def build_stack(cfg: ExperimentConfig, sweep_value: Any = None, point_index: int = 0) -> ExperimentStack:
    H = cfg.model_for(sweep_value)
    ref = exact_reference(H) if H.n <= DENSE_QUBIT_CAP else None

    filt = cfg.filter
    degree = int(filt["degree"])
    if "lambda_lb" in filt:
        spec = FilterSpec(float(filt["lambda_lb"]), float(filt["lambda_ub"]), degree)
    else:
        if ref is None:
            raise ConfigError(["fractional filter bounds need a diagonalizable model (n <= 14)"])
        spec = bounds_from_fractions(ref, float(filt["f_ub"]), float(filt["f_lb"]), degree)
    if ref is not None:
        C = normalization_C(spec, ref)
    else:
        C = float(cfg.oracle.get("normalization", 1.0))

    shots = int(cfg.oracle.get("shots", 400_000))
    if cfg.sweep is not None and cfg.sweep["parameter"] == "shots" and sweep_value is not None:
        shots = int(sweep_value)
    regime = cfg.oracle["regime"]
    if regime == "exact":
        oracle = ExactOracle(H, spec)
    elif regime == "hadamard_block":
        oracle = HadamardBlockOracle(H, spec, C, shots)
    else:
        offset = int(cfg.oracle.get("steps_offset", 20))
        floor = int(cfg.oracle.get("steps_floor", 50))
        oracle = TrotterFourierOracle(
            H,
            spec,
            kernel_order=int(cfg.oracle.get("kernel_order", 30)),
            shots_per_term=shots,
            steps_rule=lambda k: max(k * k + offset, floor),
        )
    cache_seed_tuple = (cfg.seed, 0xCA, point_index)
    cache = ElementCache(
        oracle,
        seed=int(np.random.SeedSequence(cache_seed_tuple).generate_state(1)[0]),
        hermitian_fill=bool(cfg.oracle.get("hermitian_fill", True)),
    )

    eng = cfg.engine
    a0 = eng.get("a0")
    if a0 is None:
        a0 = 0.5 / C
    schedule = StepSchedule(
        a0=float(a0), decay=float(eng.get("decay", 1.0)), period=int(eng.get("period", 1))
    )
    init_kind = eng.get("initial_state", "uniform")
    if init_kind == "uniform":
        x0 = uniform_state(H.dim)
    elif init_kind == "random":
        x0 = random_state(
            H.dim,
            np.random.Generator(np.random.PCG64(np.random.SeedSequence((cfg.seed, 0x11)))),
        )
    else:
        raise ConfigError([f"engine.initial_state must be 'uniform' or 'random', got {init_kind!r}"])
    return ExperimentStack(
        H=H,
        ref=ref,
        spec=spec,
        C=C,
        cache=cache,
        schedule=schedule,
        m_r=int(eng["m_r"]),
        m_c=int(eng["m_c"]),
        iterations=int(eng["iterations"]),
        renorm_period=int(eng.get("renorm_period", 1000)),
        initial_state=x0,
        replicas=cfg.replicas,
        seed=cfg.seed,
    )
