"""Iterative inference over a fuzzy cognitive map.

The engine repeatedly applies a one-step update rule (a "kernel")
followed by a squashing function until the state stops moving, starts
repeating, or runs out of iterations. Activations live in [-1.0, 1.0]
throughout.

Per-concept sums use ``math.fsum``, which is exactly rounded and so
independent of term order: reordering or relabeling the concepts of a
model permutes every result bit-for-bit instead of merely
approximately.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Protocol, runtime_checkable

from .core import ConceptId, FcmModel

ACTIVATION_MIN = -1.0
ACTIVATION_MAX = 1.0


class SquashKind(str, Enum):
    LOGISTIC = "logistic"
    TANH = "hyperbolic-tangent"
    LINEAR_CLIP = "linear-clip"


class KernelKind(str, Enum):
    """How the raw (pre-squash) activation for the next step is formed."""

    # next_i = squash( sum_j w_ji * a_j )
    KOSKO = "kosko"
    # next_i = squash( a_i + sum_j w_ji * a_j )
    MODIFIED_KOSKO = "modified-kosko"
    # next_i = squash( (2*a_i - 1) + sum_j w_ji * (2*a_j - 1) )
    RESCALED = "rescaled"


class RunStatus(str, Enum):
    CONVERGED = "converged"
    LIMIT_CYCLE = "limit-cycle"
    MAX_ITERATIONS = "max-iterations-reached"


@dataclass(frozen=True)
class SquashSpec:
    """Choice of squashing function plus its steepness λ.

    Steepness is ignored by linear-clip but must still be positive so a
    spec can be reused across kinds without revalidation.
    """

    kind: SquashKind = SquashKind.TANH
    steepness: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", SquashKind(self.kind))
        if not (self.steepness > 0):
            raise ValueError(f"steepness must be positive: {self.steepness}")


@dataclass(frozen=True)
class KernelSpec:
    kind: KernelKind = KernelKind.MODIFIED_KOSKO

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", KernelKind(self.kind))


def squash(x: float, spec: SquashSpec) -> float:
    """Map a raw activation into [-1, 1].

    logistic is 2/(1 + exp(-λx)) - 1, computed as tanh(λx/2): the same
    function, and the tanh form keeps the output exactly odd in
    floating point. linear-clip clamps to [-1, 1] and ignores λ.
    """
    if spec.kind is SquashKind.LINEAR_CLIP:
        return min(ACTIVATION_MAX, max(ACTIVATION_MIN, x))
    z = spec.steepness * x
    if spec.kind is SquashKind.LOGISTIC:
        z = 0.5 * z
    if z == 0.0:
        return 0.0
    # copysign construction keeps squash(-x) == -squash(x) bit-for-bit
    return math.copysign(math.tanh(abs(z)), z)


@dataclass(frozen=True)
class InferenceConfig:
    """Knobs for a simulation run; defaults are the recommended setup."""

    kernel: KernelSpec = KernelSpec()
    squash: SquashSpec = SquashSpec()
    # "neutral" means squash(0); a float means that constant everywhere
    initial_activation: str | float = "neutral"
    tolerance: float = 1e-5
    max_iterations: int = 1000
    cycle_detection_window: int = 50

    def __post_init__(self) -> None:
        # accept bare kind strings/enums for both specs as a convenience
        if not isinstance(self.kernel, KernelSpec):
            object.__setattr__(self, "kernel", KernelSpec(self.kernel))
        if not isinstance(self.squash, SquashSpec):
            object.__setattr__(self, "squash", SquashSpec(self.squash))
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be positive: {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1: {self.max_iterations}")
        if self.cycle_detection_window < 1:
            raise ValueError(
                f"cycle_detection_window must be >= 1: {self.cycle_detection_window}"
            )
        if isinstance(self.initial_activation, str):
            if self.initial_activation != "neutral":
                raise ValueError(
                    "initial_activation must be 'neutral' or a number: "
                    f"{self.initial_activation!r}"
                )
        elif not (ACTIVATION_MIN <= self.initial_activation <= ACTIVATION_MAX):
            raise ValueError(
                f"initial_activation {self.initial_activation} outside [-1, 1]"
            )

    def initial_value(self) -> float:
        if self.initial_activation == "neutral":
            return squash(0.0, self.squash)
        return float(self.initial_activation)


class InferenceError(ValueError):
    """Base class for bad simulation requests."""


class UnknownClampId(InferenceError):
    def __init__(self, concept_id: ConceptId):
        super().__init__(f"clamp references unknown concept {concept_id!r}")
        self.concept_id = concept_id


class ClampOutOfRange(InferenceError):
    def __init__(self, concept_id: ConceptId, value: float):
        super().__init__(f"clamp on {concept_id!r} is {value}, outside [-1, 1]")
        self.concept_id = concept_id
        self.value = value


class BadInitialState(InferenceError):
    pass


def _check_clamps(model: FcmModel, clamps: Mapping[ConceptId, float]) -> None:
    for concept_id, value in clamps.items():
        if concept_id not in model:
            raise UnknownClampId(concept_id)
        if not (ACTIVATION_MIN <= value <= ACTIVATION_MAX):
            raise ClampOutOfRange(concept_id, value)


# per-target (source, weight) pairs in model concept order
_Table = tuple[tuple[ConceptId, tuple[tuple[ConceptId, float], ...]], ...]


def _incoming_table(model: FcmModel) -> _Table:
    incoming: dict[ConceptId, list[tuple[ConceptId, float]]] = {
        c.id: [] for c in model.concepts
    }
    for edge in model.edges:
        incoming[edge.target].append((edge.source, edge.weight))
    return tuple((c.id, tuple(incoming[c.id])) for c in model.concepts)


def _step_inner(
    table: _Table,
    state: Mapping[ConceptId, float],
    config: InferenceConfig,
    clamps: Mapping[ConceptId, float],
) -> dict[ConceptId, float]:
    kernel = config.kernel.kind
    spec = config.squash
    nxt: dict[ConceptId, float] = {}
    for concept_id, sources in table:
        if kernel is KernelKind.RESCALED:
            terms = [2.0 * state[concept_id] - 1.0]
            terms += [w * (2.0 * state[s] - 1.0) for s, w in sources]
        elif kernel is KernelKind.MODIFIED_KOSKO:
            terms = [state[concept_id]]
            terms += [w * state[s] for s, w in sources]
        else:
            terms = [w * state[s] for s, w in sources]
        nxt[concept_id] = squash(math.fsum(terms), spec)
    for concept_id, value in clamps.items():
        nxt[concept_id] = value
    return nxt


def step(
    model: FcmModel,
    state: Mapping[ConceptId, float],
    config: InferenceConfig,
    clamps: Mapping[ConceptId, float] | None = None,
) -> dict[ConceptId, float]:
    """One synchronous update of every concept, clamps re-imposed last."""
    clamps = clamps or {}
    _check_clamps(model, clamps)
    missing = [c.id for c in model.concepts if c.id not in state]
    if missing:
        raise BadInitialState(f"state missing concepts: {missing}")
    return _step_inner(_incoming_table(model), state, config, clamps)


@dataclass(frozen=True)
class SteadyStateResult:
    """Outcome of iterating until the state settles (or fails to)."""

    status: RunStatus
    iterations: int
    final_state: dict[ConceptId, float]
    # for limit cycles: number of steps after which states repeat
    period: int | None = None
    trajectory: tuple[dict[ConceptId, float], ...] | None = field(
        default=None, compare=False
    )

    @property
    def converged(self) -> bool:
        return self.status is RunStatus.CONVERGED


def run_to_steady_state(
    model: FcmModel,
    config: InferenceConfig | None = None,
    clamps: Mapping[ConceptId, float] | None = None,
    initial_state: Mapping[ConceptId, float] | None = None,
    record_trajectory: bool = False,
) -> SteadyStateResult:
    """Iterate until convergence, a repeated state, or the step limit.

    Convergence means every concept moved by less than
    ``config.tolerance`` in one step. A state seen before within the
    detection window is a limit cycle, reported via status rather than
    raised. Clamped concepts are pinned from the initial state onward.
    ``initial_state`` overrides the configured uniform start, mainly
    for probing the dynamics from chosen corners of the state space.
    """
    config = config or InferenceConfig()
    clamps = clamps or {}
    _check_clamps(model, clamps)

    if initial_state is None:
        base = config.initial_value()
        state: dict[ConceptId, float] = {c.id: base for c in model.concepts}
    else:
        missing = [c.id for c in model.concepts if c.id not in initial_state]
        if missing:
            raise BadInitialState(f"initial state missing concepts: {missing}")
        unknown = [k for k in initial_state if k not in model]
        if unknown:
            raise BadInitialState(f"initial state has unknown concepts: {unknown}")
        for concept_id, value in initial_state.items():
            if not (ACTIVATION_MIN <= value <= ACTIVATION_MAX):
                raise BadInitialState(
                    f"initial activation for {concept_id!r} is {value}, outside [-1, 1]"
                )
        state = {c.id: float(initial_state[c.id]) for c in model.concepts}
    for concept_id, value in clamps.items():
        state[concept_id] = value

    table = _incoming_table(model)
    order = model.concept_ids
    trajectory: list[dict[ConceptId, float]] = [dict(state)] if record_trajectory else []
    # exact-match window over recent states, current state included
    recent: deque[tuple[float, ...]] = deque(maxlen=config.cycle_detection_window)
    recent.append(tuple(state[c] for c in order))

    for iteration in range(1, config.max_iterations + 1):
        nxt = _step_inner(table, state, config, clamps)
        if record_trajectory:
            trajectory.append(dict(nxt))
        delta = max((abs(nxt[c] - state[c]) for c in order), default=0.0)
        if delta < config.tolerance:
            return SteadyStateResult(
                status=RunStatus.CONVERGED,
                iterations=iteration,
                final_state=nxt,
                trajectory=tuple(trajectory) if record_trajectory else None,
            )
        key = tuple(nxt[c] for c in order)
        if key in recent:
            # the latest match gives the shortest period
            last = max(i for i, seen in enumerate(recent) if seen == key)
            return SteadyStateResult(
                status=RunStatus.LIMIT_CYCLE,
                iterations=iteration,
                final_state=nxt,
                period=len(recent) - last,
                trajectory=tuple(trajectory) if record_trajectory else None,
            )
        recent.append(key)
        state = nxt

    return SteadyStateResult(
        status=RunStatus.MAX_ITERATIONS,
        iterations=config.max_iterations,
        final_state=state,
        trajectory=tuple(trajectory) if record_trajectory else None,
    )


@runtime_checkable
class ScenarioLike(Protocol):
    """What run_scenario needs from a scenario definition."""

    name: str
    clamps: Mapping[ConceptId, float]


@dataclass(frozen=True)
class ScenarioOutcome:
    """Clamped run versus the unclamped baseline of the same model."""

    scenario_name: str
    baseline: SteadyStateResult
    clamped: SteadyStateResult
    # clamped steady value minus baseline steady value, per concept;
    # clamped concepts report the change implied by their held values
    relative_change: dict[ConceptId, float]


CONFIG_FIELDS = (
    "kernel",
    "squash",
    "steepness",
    "initial_activation",
    "tolerance",
    "max_iterations",
    "cycle_detection_window",
)


def config_to_obj(config: InferenceConfig) -> dict:
    """Flat plain-data form used in documents, CLI output, and the API."""
    return {
        "kernel": config.kernel.kind.value,
        "squash": config.squash.kind.value,
        "steepness": config.squash.steepness,
        "initial_activation": config.initial_activation,
        "tolerance": config.tolerance,
        "max_iterations": config.max_iterations,
        "cycle_detection_window": config.cycle_detection_window,
    }


def config_from_obj(obj: dict) -> InferenceConfig:
    """Inverse of config_to_obj; every field optional, unknown keys rejected."""
    if not isinstance(obj, dict):
        raise ValueError("config must be an object")
    unknown = [k for k in obj if k not in CONFIG_FIELDS]
    if unknown:
        raise ValueError(f"unknown config fields: {', '.join(sorted(unknown))}")
    defaults = InferenceConfig()
    try:
        return InferenceConfig(
            kernel=KernelSpec(obj.get("kernel", defaults.kernel.kind)),
            squash=SquashSpec(
                kind=obj.get("squash", defaults.squash.kind),
                steepness=obj.get("steepness", defaults.squash.steepness),
            ),
            initial_activation=obj.get(
                "initial_activation", defaults.initial_activation
            ),
            tolerance=obj.get("tolerance", defaults.tolerance),
            max_iterations=obj.get("max_iterations", defaults.max_iterations),
            cycle_detection_window=obj.get(
                "cycle_detection_window", defaults.cycle_detection_window
            ),
        )
    except (TypeError, ValueError) as exc:
        raise ValueError(str(exc))


def result_to_obj(result: SteadyStateResult) -> dict:
    """Plain-data form of a steady-state result (trajectory omitted)."""
    return {
        "status": result.status.value,
        "iterations": result.iterations,
        "period": result.period,
        "final_state": dict(result.final_state),
    }


def result_from_obj(obj: dict) -> SteadyStateResult:
    return SteadyStateResult(
        status=RunStatus(obj["status"]),
        iterations=int(obj["iterations"]),
        final_state={str(k): float(v) for k, v in obj["final_state"].items()},
        period=None if obj.get("period") is None else int(obj["period"]),
    )


def outcome_to_obj(outcome: ScenarioOutcome) -> dict:
    return {
        "scenario_name": outcome.scenario_name,
        "baseline": result_to_obj(outcome.baseline),
        "clamped": result_to_obj(outcome.clamped),
        "relative_change": dict(outcome.relative_change),
    }


def outcome_from_obj(obj: dict) -> ScenarioOutcome:
    return ScenarioOutcome(
        scenario_name=str(obj["scenario_name"]),
        baseline=result_from_obj(obj["baseline"]),
        clamped=result_from_obj(obj["clamped"]),
        relative_change={
            str(k): float(v) for k, v in obj["relative_change"].items()
        },
    )


def run_scenario(
    model: FcmModel,
    scenario: ScenarioLike,
    config: InferenceConfig | None = None,
) -> ScenarioOutcome:
    """Measure what holding some concepts fixed does to all the rest.

    Both runs start from the same initial state and share one config
    (a scenario may carry a ``config_override`` that wins). With an
    empty clamp set the two runs are the same computation, so every
    relative change is exactly zero. Non-convergence of either run is
    visible in its status, never an exception.
    """
    override = getattr(scenario, "config_override", None)
    effective = override or config or InferenceConfig()
    baseline = run_to_steady_state(model, effective)
    clamped = run_to_steady_state(model, effective, clamps=scenario.clamps)
    relative_change = {
        c.id: clamped.final_state[c.id] - baseline.final_state[c.id]
        for c in model.concepts
    }
    return ScenarioOutcome(
        scenario_name=scenario.name,
        baseline=baseline,
        clamped=clamped,
        relative_change=relative_change,
    )
