"""Mamdani fuzzy inference over percent-valued linguistic variables.

Inputs are fuzzified against piecewise-linear sets, rule antecedents are
combined with ``min``, each consequent set is clipped at its rule's
activation, clipped sets are merged with ``max`` on a sample grid and the
result is defuzzified with the discrete centroid.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal

import numpy as np

from .errors import EmptyAggregateError, SystemDefinitionError

logger = logging.getLogger(__name__)

DOMAIN = (0.0, 100.0)
DEFAULT_GRID_RESOLUTION = 1001

# Samples used when checking the coverage invariant of a variable.
_COVERAGE_SAMPLES = 2001

_ARITY = {"triangular": 3, "trapezoidal": 4}


@dataclass(frozen=True)
class MembershipFunction:
    """Triangular ``(a, b, c)`` or trapezoidal ``(a, b, c, d)`` membership.

    A shoulder is written by repeating a breakpoint, e.g. ``(0, 0, 20, 50)``
    is 1 from 0 to 20 and falls to 0 at 50.
    """

    kind: Literal["triangular", "trapezoidal"]
    breakpoints: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in _ARITY:
            raise SystemDefinitionError(f"unknown membership kind {self.kind!r}")
        try:
            bps = tuple(float(b) for b in self.breakpoints)
        except (TypeError, ValueError):
            raise SystemDefinitionError(
                f"breakpoints must be numbers, got {self.breakpoints!r}"
            ) from None
        if len(bps) != _ARITY[self.kind]:
            raise SystemDefinitionError(
                f"{self.kind} needs {_ARITY[self.kind]} breakpoints, got {len(bps)}"
            )
        if not all(math.isfinite(b) for b in bps):
            raise SystemDefinitionError(f"non-finite breakpoint in {bps}")
        if any(lo > hi for lo, hi in zip(bps, bps[1:])):
            raise SystemDefinitionError(f"breakpoints must be non-decreasing: {bps}")
        object.__setattr__(self, "breakpoints", bps)

    @classmethod
    def triangular(cls, a: float, b: float, c: float) -> MembershipFunction:
        return cls("triangular", (a, b, c))

    @classmethod
    def trapezoidal(cls, a: float, b: float, c: float, d: float) -> MembershipFunction:
        return cls("trapezoidal", (a, b, c, d))

    @property
    def corners(self) -> tuple[float, float, float, float]:
        bp = self.breakpoints
        if self.kind == "triangular":
            return bp[0], bp[1], bp[1], bp[2]
        return bp  # type: ignore[return-value]

    @property
    def peak(self) -> float:
        """Centre of the plateau where membership is 1."""
        _, b, c, _ = self.corners
        return (b + c) / 2.0

    def __call__(self, x):
        """Membership degree of ``x`` (scalar or array)."""
        a, b, c, d = self.corners
        xa = np.asarray(x, dtype=float)
        # Vertical edges (a == b, c == d) hold the plateau value out to the boundary.
        # Near-vertical edges may overflow to inf; clipping maps that to 0 or 1.
        with np.errstate(over="ignore"):
            rise = np.ones_like(xa) if b == a else np.clip((xa - a) / (b - a), 0.0, 1.0)
            fall = np.ones_like(xa) if d == c else np.clip((d - xa) / (d - c), 0.0, 1.0)
        mu = np.minimum(rise, fall)
        return float(mu) if mu.ndim == 0 else mu

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "breakpoints": list(self.breakpoints)}


def membership(mf: MembershipFunction, x: float) -> float:
    return mf(x)


@dataclass(frozen=True)
class FuzzyVariable:
    name: str
    sets: tuple[tuple[str, MembershipFunction], ...]
    domain: tuple[float, float] = DOMAIN

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple((str(lbl), mf) for lbl, mf in self.sets))
        lo, hi = self.domain
        if not self.sets:
            raise SystemDefinitionError(f"variable {self.name!r} has no sets")
        labels = [lbl for lbl, _ in self.sets]
        if len(set(labels)) != len(labels):
            raise SystemDefinitionError(f"duplicate set labels in {self.name!r}: {labels}")
        for lbl, mf in self.sets:
            if mf.breakpoints[0] < lo or mf.breakpoints[-1] > hi:
                raise SystemDefinitionError(
                    f"{self.name}/{lbl}: breakpoints {mf.breakpoints} leave domain {self.domain}"
                )
        peaks = [mf.peak for _, mf in self.sets]
        if any(p > q for p, q in zip(peaks, peaks[1:])):
            raise SystemDefinitionError(f"{self.name}: set peaks out of order {peaks}")
        grid = np.union1d(
            np.linspace(lo, hi, _COVERAGE_SAMPLES),
            [b for _, mf in self.sets for b in mf.breakpoints],
        )
        cover = np.max([mf(grid) for _, mf in self.sets], axis=0)
        if cover.min() <= 0.0:
            gap = float(grid[np.argmin(cover)])
            raise SystemDefinitionError(f"{self.name}: no set covers x={gap:g}")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lbl for lbl, _ in self.sets)

    def __getitem__(self, label: str) -> MembershipFunction:
        for lbl, mf in self.sets:
            if lbl == label:
                return mf
        raise KeyError(label)

    def clamp(self, x: float) -> float:
        if not math.isfinite(x):
            raise ValueError(f"{self.name}: input must be finite, got {x!r}")
        lo, hi = self.domain
        if x < lo or x > hi:
            logger.debug("%s: input %g clamped into [%g, %g]", self.name, x, lo, hi)
            return min(max(x, lo), hi)
        return float(x)

    def fuzzify(self, x: float) -> dict[str, float]:
        x = self.clamp(x)
        return {lbl: mf(x) for lbl, mf in self.sets}

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "sets": [{"label": lbl, **mf.to_dict()} for lbl, mf in self.sets],
        }

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> FuzzyVariable:
        try:
            sets = tuple(
                (s["label"], MembershipFunction(s["kind"], tuple(s["breakpoints"])))
                for s in doc["sets"]
            )
            return cls(str(doc["name"]), sets)
        except (KeyError, TypeError) as exc:
            raise SystemDefinitionError(f"malformed variable: {exc!r}") from None


def fuzzify(var: FuzzyVariable, x: float) -> dict[str, float]:
    return var.fuzzify(x)


@dataclass(frozen=True)
class FuzzyRule:
    """``IF var1 is L1 AND var2 is L2 ... THEN output is consequent``."""

    antecedents: tuple[tuple[str, str], ...]
    consequent: str
    note: str = ""

    def __post_init__(self):
        object.__setattr__(
            self, "antecedents", tuple((str(v), str(l)) for v, l in self.antecedents)
        )


def evaluate_rule(rule: FuzzyRule, fuzzified: Mapping[str, Mapping[str, float]]) -> float:
    """Activation of ``rule``: the minimum of its antecedent degrees."""
    degrees = []
    for var, label in rule.antecedents:
        try:
            degrees.append(fuzzified[var][label])
        except KeyError:
            raise SystemDefinitionError(f"rule refers to unknown set {var}/{label}") from None
    return min(degrees)


@dataclass(frozen=True, eq=False)
class AggregatedOutput:
    """Aggregated output membership sampled on ``xs``."""

    xs: np.ndarray
    mu: np.ndarray
    strengths: Mapping[str, float] = field(default_factory=dict)

    @property
    def area(self) -> float:
        return float(self.mu.sum())


def clip_and_aggregate(
    output: FuzzyVariable,
    strengths: Mapping[str, float],
    grid_resolution: int = DEFAULT_GRID_RESOLUTION,
) -> AggregatedOutput:
    """Clip each output set at its strength and merge them with ``max``."""
    xs = np.linspace(*output.domain, grid_resolution)
    mu = np.zeros_like(xs)
    for label, level in strengths.items():
        if level > 0.0:
            np.maximum(mu, np.minimum(level, output[label](xs)), out=mu)
    xs.flags.writeable = False
    mu.flags.writeable = False
    return AggregatedOutput(xs, mu, dict(strengths))


def defuzzify_centroid(agg: AggregatedOutput) -> float:
    total = agg.mu.sum()
    if total <= 0.0:
        raise EmptyAggregateError("no rule fired; aggregated output has zero area")
    return float(np.dot(agg.xs, agg.mu) / total)


@dataclass(frozen=True)
class InferenceSystem:
    inputs: tuple[FuzzyVariable, ...]
    output: FuzzyVariable
    rules: tuple[FuzzyRule, ...]
    grid_resolution: int = DEFAULT_GRID_RESOLUTION

    _xs: np.ndarray = field(init=False, repr=False, compare=False)
    _out_mu: np.ndarray = field(init=False, repr=False, compare=False)
    _rule_index: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "rules", tuple(self.rules))
        if not self.inputs:
            raise SystemDefinitionError("system needs at least one input variable")
        if not self.rules:
            raise SystemDefinitionError("system needs at least one rule")
        if int(self.grid_resolution) != self.grid_resolution or self.grid_resolution < 2:
            raise SystemDefinitionError(
                f"grid_resolution must be an integer >= 2, got {self.grid_resolution!r}"
            )
        names = [v.name for v in self.inputs]
        if len(set(names)) != len(names):
            raise SystemDefinitionError(f"duplicate input names: {names}")

        index = []
        for n, rule in enumerate(self.rules, 1):
            ante = []
            for var, label in rule.antecedents:
                if var not in names:
                    raise SystemDefinitionError(f"rule {n}: unknown variable {var!r}")
                vi = names.index(var)
                if label not in self.inputs[vi].labels:
                    raise SystemDefinitionError(f"rule {n}: {var!r} has no set {label!r}")
                ante.append((vi, self.inputs[vi].labels.index(label)))
            if not ante:
                raise SystemDefinitionError(f"rule {n}: no antecedents")
            if rule.consequent not in self.output.labels:
                raise SystemDefinitionError(
                    f"rule {n}: output has no set {rule.consequent!r}"
                )
            index.append((tuple(ante), self.output.labels.index(rule.consequent)))

        xs = np.linspace(*self.output.domain, int(self.grid_resolution))
        out_mu = np.stack([mf(xs) for _, mf in self.output.sets])
        xs.flags.writeable = False
        out_mu.flags.writeable = False
        object.__setattr__(self, "grid_resolution", int(self.grid_resolution))
        object.__setattr__(self, "_xs", xs)
        object.__setattr__(self, "_out_mu", out_mu)
        object.__setattr__(self, "_rule_index", tuple(index))

    # -- single evaluation -------------------------------------------------

    def fuzzify_inputs(self, *values: float) -> dict[str, dict[str, float]]:
        if len(values) != len(self.inputs):
            raise TypeError(f"expected {len(self.inputs)} inputs, got {len(values)}")
        return {var.name: var.fuzzify(x) for var, x in zip(self.inputs, values)}

    def rule_strengths(self, *values: float) -> dict[str, float]:
        """Strongest activation reaching each output label."""
        fuzzified = self.fuzzify_inputs(*values)
        strengths = dict.fromkeys(self.output.labels, 0.0)
        for rule in self.rules:
            act = evaluate_rule(rule, fuzzified)
            strengths[rule.consequent] = max(strengths[rule.consequent], act)
        return strengths

    def infer(self, *values: float) -> AggregatedOutput:
        return clip_and_aggregate(
            self.output, self.rule_strengths(*values), self.grid_resolution
        )

    def fuse(self, *values: float) -> float:
        return defuzzify_centroid(self.infer(*values))

    # -- batched evaluation ------------------------------------------------

    def fuse_many(self, *columns, chunk: int = 512) -> np.ndarray:
        """Vectorised :meth:`fuse` over equally shaped input arrays."""
        if len(columns) != len(self.inputs):
            raise TypeError(f"expected {len(self.inputs)} input arrays, got {len(columns)}")
        cols = np.broadcast_arrays(*(np.asarray(c, dtype=float) for c in columns))
        shape = cols[0].shape
        flat = [c.ravel() for c in cols]
        for var, c in zip(self.inputs, flat):
            if not np.all(np.isfinite(c)):
                raise ValueError(f"{var.name}: inputs must be finite")
        degrees = [
            np.stack([mf(np.clip(c, *var.domain)) for _, mf in var.sets], axis=1)
            for var, c in zip(self.inputs, flat)
        ]
        n = flat[0].size
        strengths = np.zeros((n, len(self.output.sets)))
        for ante, out in self._rule_index:
            act = np.min([degrees[vi][:, li] for vi, li in ante], axis=0)
            np.maximum(strengths[:, out], act, out=strengths[:, out])

        result = np.empty(n)
        for start in range(0, n, chunk):
            s = strengths[start : start + chunk, :, None]
            agg = np.minimum(s, self._out_mu[None]).max(axis=1)
            area = agg.sum(axis=1)
            if np.any(area <= 0.0):
                bad = start + int(np.argmax(area <= 0.0))
                raise EmptyAggregateError(
                    f"no rule fired for inputs {[float(c[bad]) for c in flat]}"
                )
            result[start : start + chunk] = agg @ self._xs / area
        return result.reshape(shape)

    # -- serialisation -----------------------------------------------------

    def with_grid_resolution(self, grid_resolution: int) -> InferenceSystem:
        return InferenceSystem(self.inputs, self.output, self.rules, grid_resolution)

    def to_dict(self) -> dict[str, Any]:
        rules = []
        for n, rule in enumerate(self.rules, 1):
            by_var = dict(rule.antecedents)
            entry: dict[str, Any] = {
                "id": n,
                "if": [by_var.get(v.name) for v in self.inputs],
                "then": rule.consequent,
            }
            if rule.note:
                entry["note"] = rule.note
            rules.append(entry)
        return {
            "inputs": [v.to_dict() for v in self.inputs],
            "output": self.output.to_dict(),
            "rules": rules,
            "grid_resolution": self.grid_resolution,
        }

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> InferenceSystem:
        if not isinstance(doc, Mapping):
            raise SystemDefinitionError("system definition must be a JSON object")
        try:
            inputs = tuple(FuzzyVariable.from_dict(v) for v in doc["inputs"])
            output = FuzzyVariable.from_dict(doc["output"])
            rules = []
            for n, r in enumerate(doc["rules"], 1):
                labels = list(r["if"])
                if len(labels) != len(inputs):
                    raise SystemDefinitionError(
                        f"rule {n}: {len(labels)} antecedents for {len(inputs)} inputs"
                    )
                # null skips an input (rule does not depend on it)
                ante = tuple(
                    (v.name, lbl) for v, lbl in zip(inputs, labels) if lbl is not None
                )
                rules.append(FuzzyRule(ante, r["then"], r.get("note", "")))
            res = doc.get("grid_resolution", DEFAULT_GRID_RESOLUTION)
        except (KeyError, TypeError) as exc:
            raise SystemDefinitionError(f"malformed system definition: {exc!r}") from None
        return cls(inputs, output, tuple(rules), res)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @property
    def fingerprint(self) -> str:
        """Short SHA-256 of the canonical JSON definition."""
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


def infer(system: InferenceSystem, audio_pct: float, video_pct: float) -> AggregatedOutput:
    return system.infer(audio_pct, video_pct)


def fuse_intensity(system: InferenceSystem, audio_pct: float, video_pct: float) -> float:
    return system.fuse(audio_pct, video_pct)


# -- default system ----------------------------------------------------------

AUDIO = "Audio Emotion Intensity"
VIDEO = "Video Emotion Intensity"
OVERALL = "Overall Emotion Intensity"

INPUT_LABELS = ("Low", "Medium", "High")
OUTPUT_LABELS = ("Little Bit", "Sometimes", "High", "Very High", "Extremely High")

_TRI = MembershipFunction.triangular
_TRAP = MembershipFunction.trapezoidal


def intensity_variable(name: str) -> FuzzyVariable:
    return FuzzyVariable(
        name,
        (
            ("Low", _TRAP(0, 0, 20, 50)),
            ("Medium", _TRI(20, 50, 80)),
            ("High", _TRAP(50, 80, 100, 100)),
        ),
    )


def overall_variable() -> FuzzyVariable:
    return FuzzyVariable(
        OVERALL,
        (
            ("Little Bit", _TRI(0, 0, 25)),
            ("Sometimes", _TRI(0, 25, 50)),
            ("High", _TRI(25, 50, 75)),
            ("Very High", _TRI(50, 75, 100)),
            ("Extremely High", _TRI(75, 100, 100)),
        ),
    )


# (audio, video, overall); the eighth row is the only one that differs by mode.
_RULE_ROWS = (
    ("Low", "Low", "Little Bit"),
    ("Low", "Medium", "Sometimes"),
    ("Low", "High", "High"),
    ("Medium", "Low", "Sometimes"),
    ("Medium", "Medium", "High"),
    ("Medium", "High", "Very High"),
    ("High", "Low", "Sometimes"),
    None,
    ("High", "High", "Extremely High"),
)

RuleMode = Literal["completed", "verbatim"]


def default_rules(mode: RuleMode = "completed") -> tuple[FuzzyRule, ...]:
    """The nine-rule base.

    The published table lists (Medium, Medium) twice, with consequents High
    and Very High, and never covers (High, Medium).  ``completed`` reads the
    second entry as (High, Medium) -> Very High, mirroring (Medium, High);
    ``verbatim`` keeps the duplicate and leaves (High, Medium) unfired.
    """
    if mode == "completed":
        eighth = FuzzyRule(
            ((AUDIO, "High"), (VIDEO, "Medium")),
            "Very High",
            "audio read as High to complete the 3x3 grid; "
            "the source table lists (Medium, Medium) here",
        )
    elif mode == "verbatim":
        eighth = FuzzyRule(
            ((AUDIO, "Medium"), (VIDEO, "Medium")),
            "Very High",
            "duplicate antecedent of rule 5 as tabulated; max aggregation keeps both",
        )
    else:
        raise SystemDefinitionError(f"unknown rules mode {mode!r}")
    rules = []
    for row in _RULE_ROWS:
        if row is None:
            rules.append(eighth)
        else:
            a, v, out = row
            rules.append(FuzzyRule(((AUDIO, a), (VIDEO, v)), out))
    return tuple(rules)


def default_system(
    rules: RuleMode = "completed", grid_resolution: int = DEFAULT_GRID_RESOLUTION
) -> InferenceSystem:
    return InferenceSystem(
        (intensity_variable(AUDIO), intensity_variable(VIDEO)),
        overall_variable(),
        default_rules(rules),
        grid_resolution,
    )


def load_system(source: str | Path | Mapping[str, Any]) -> InferenceSystem:
    """Build a system from a JSON file path or an already-parsed document."""
    if isinstance(source, Mapping):
        return InferenceSystem.from_dict(source)
    try:
        doc = json.loads(Path(source).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SystemDefinitionError(f"{Path(source).name}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise SystemDefinitionError(f"cannot read system file: {exc.strerror}") from None
    return InferenceSystem.from_dict(doc)


def rule_grid(system: InferenceSystem) -> list[list[list[str]]]:
    """Consequents indexed by ``[audio label][video label]`` for a two-input system."""
    if len(system.inputs) != 2:
        raise SystemDefinitionError("rule grid is defined for two-input systems")
    a_var, v_var = system.inputs
    grid = [[[] for _ in v_var.labels] for _ in a_var.labels]
    for rule in system.rules:
        by_var = dict(rule.antecedents)
        if a_var.name in by_var and v_var.name in by_var:
            i = a_var.labels.index(by_var[a_var.name])
            j = v_var.labels.index(by_var[v_var.name])
            grid[i][j].append(rule.consequent)
    return grid
