"""Flat ``key = value`` experiment configs.

One assignment per line, ``#`` starts a comment.  Angles are degrees.

=================  ===========================================  =========
key                meaning                                      default
=================  ===========================================  =========
topology           ``cycle`` or ``line``                        required
n                  cycle size (cycle only)                      required
steps / turns      run length; exactly one; turns need odd n    required
coin.xi/theta/zeta coin angles                                  0/45/0
gate.alpha/beta    phase gate; omit both for no gate            none
initial.theta0     initial coin polar angle                     90
initial.phi0       initial coin phase                           0
initial.position   starting position label                      0
noise.type         ``none``, ``gad`` or ``phase_damping``       none
noise.gamma0       coupling strength                            0
noise.T            bath temperature                             0
noise.Delta        interaction time per step                    0
noise.omega        bath mode frequency                          1
noise.lambda       phase damping strength (overrides the law)   unset
coherence.M        number of coherence bins (<= s)              min(5, s)
reference_run      compute the noiseless reference              true
record_every       stride: ``N`` steps or ``X turns``           1
write_distributions  emit distributions.csv                     true
sweep.<key>        comma-separated values for a sweep axis      --
=================  ===========================================  =========
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CapacityError, ValidationError
from .evolution import RunSpec
from .noise import GADParams, PhaseDampingParams
from .operators import CoinParams, PhaseGateParams
from .state import Cycle, InitialStateParams, Line

DEFAULT_M = 5
MAX_SWEEP_POINTS = 4096

FLOAT_KEYS = {
    "coin.xi", "coin.theta", "coin.zeta", "gate.alpha", "gate.beta",
    "initial.theta0", "initial.phi0", "noise.gamma0", "noise.T",
    "noise.Delta", "noise.omega", "noise.lambda", "turns",
}
INT_KEYS = {"n", "steps", "initial.position", "coherence.M"}
BOOL_KEYS = {"reference_run", "write_distributions"}
CHOICE_KEYS = {"topology": ("cycle", "line"), "noise.type": ("none", "gad", "phase_damping")}
OTHER_KEYS = {"record_every"}
KNOWN_KEYS = FLOAT_KEYS | INT_KEYS | BOOL_KEYS | set(CHOICE_KEYS) | OTHER_KEYS
UNSWEEPABLE = {"topology", "coherence.M", "noise.type", "record_every", "write_distributions", "reference_run"}


@dataclass(frozen=True)
class ExperimentConfig:
    run: RunSpec
    coherence_M: int | None
    reference_run: bool = True
    record_every: int = 1
    write_distributions: bool = True
    raw: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class SweepSpec:
    base: dict
    axes: dict

    def points(self, cap: int = MAX_SWEEP_POINTS) -> list[dict]:
        """Grid points in row-major order (last axis fastest)."""
        size = math.prod(len(v) for v in self.axes.values()) if self.axes else 1
        if size > cap:
            raise CapacityError(f"sweep has {size} points, cap is {cap}")
        keys = list(self.axes)
        return [dict(zip(keys, combo)) for combo in itertools.product(*self.axes.values())]


def parse_lines(text: str) -> dict[str, str]:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"line {lineno}: expected key = value", f"line {lineno}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ValidationError(f"line {lineno}: empty key", f"line {lineno}")
        if key in raw:
            raise ValidationError("duplicate key", key)
        raw[key] = value
    return raw


def _coerce(key: str, value: str):
    if key in FLOAT_KEYS:
        try:
            out = float(value)
        except ValueError:
            raise ValidationError(f"expected a number, got {value!r}", key) from None
        if not math.isfinite(out):
            raise ValidationError("must be finite", key)
        return out
    if key in INT_KEYS:
        try:
            return int(value)
        except ValueError:
            raise ValidationError(f"expected an integer, got {value!r}", key) from None
    if key in BOOL_KEYS:
        low = value.lower()
        if low not in ("true", "false"):
            raise ValidationError(f"expected true or false, got {value!r}", key)
        return low == "true"
    if key in CHOICE_KEYS:
        if value not in CHOICE_KEYS[key]:
            raise ValidationError(f"expected one of {CHOICE_KEYS[key]}, got {value!r}", key)
        return value
    return value


def _parse_stride(value, half: int | None) -> int:
    text = str(value).strip().lower()
    turns = False
    for suffix in ("turns", "turn"):
        if text.endswith(suffix):
            text, turns = text[: -len(suffix)].strip(), True
            break
    try:
        amount = float(text)
    except ValueError:
        raise ValidationError(f"expected 'N' steps or 'X turns', got {value!r}", "record_every") from None
    if turns:
        if half is None:
            raise ValidationError("turn strides require an odd cycle", "record_every")
        amount *= half
    stride = int(round(amount))
    if stride < 1 or (not turns and amount != stride):
        raise ValidationError("stride must be a positive whole number of steps", "record_every")
    return stride


def build_config(raw: dict) -> ExperimentConfig:
    """Typed config from already-split ``key -> value`` pairs (values may be str or typed)."""
    unknown = sorted(set(raw) - KNOWN_KEYS)
    if unknown:
        raise ValidationError("unknown key", unknown[0])
    vals = {k: _coerce(k, v) if isinstance(v, str) else v for k, v in raw.items() if k != "record_every"}

    if "topology" not in vals:
        raise ValidationError("required", "topology")
    has_steps, has_turns = "steps" in vals, "turns" in vals
    if has_steps == has_turns:
        raise ValidationError("give exactly one of steps or turns", "steps")

    if vals["topology"] == "cycle":
        if "n" not in vals:
            raise ValidationError("required for a cycle", "n")
        if vals["n"] < 2:
            raise ValidationError("must be >= 2", "n")
        if has_turns and vals["n"] % 2 == 0:
            raise ValidationError("turns require odd n", "turns")
        topology = Cycle(vals["n"])
    else:
        if "n" in vals:
            raise ValidationError("line lattices are sized automatically; drop n", "n")
        if has_turns:
            raise ValidationError("turns require a cycle", "turns")
        if vals["steps"] < 0:
            raise ValidationError("must be >= 0", "steps")
        topology = Line.centered(vals["steps"], vals.get("initial.position", 0))
    if has_steps and vals["steps"] < 0:
        raise ValidationError("must be >= 0", "steps")
    if has_turns and vals["turns"] < 0:
        raise ValidationError("must be >= 0", "turns")

    coin = CoinParams(vals.get("coin.xi", 0.0), vals.get("coin.theta", 45.0), vals.get("coin.zeta", 0.0))
    gate = None
    if "gate.alpha" in vals or "gate.beta" in vals:
        gate = PhaseGateParams(vals.get("gate.alpha", 0.0), vals.get("gate.beta", 0.0))
    initial = InitialStateParams(
        vals.get("initial.theta0", 90.0), vals.get("initial.phi0", 0.0), vals.get("initial.position", 0)
    )
    if topology.cyclic and not 0 <= initial.start_position < topology.n:
        raise ValidationError(f"must lie in [0, {topology.n})", "initial.position")

    ntype = vals.get("noise.type", "none")
    gamma0, T = vals.get("noise.gamma0", 0.0), vals.get("noise.T", 0.0)
    delta, omega = vals.get("noise.Delta", 0.0), vals.get("noise.omega", 1.0)
    if ntype == "none":
        stray = [k for k in vals if k.startswith("noise.") and k != "noise.type"]
        if stray:
            raise ValidationError("set noise.type to use noise parameters", stray[0])
        noise = None
    elif ntype == "gad":
        if "noise.lambda" in vals:
            raise ValidationError("only valid for phase_damping", "noise.lambda")
        noise = GADParams(gamma0, T, delta, omega)
    else:
        noise = PhaseDampingParams(vals.get("noise.lambda"), gamma0, T, delta, omega)
        GADParams(gamma0, T, delta, omega)  # range checks for the shared law

    run = RunSpec(
        topology=topology,
        coin=coin,
        steps=vals.get("steps"),
        turns=vals.get("turns"),
        gate=gate,
        initial=initial,
        noise=noise,
    )
    half = run.half
    M = vals.get("coherence.M")
    if M is not None:
        if M < 1:
            raise ValidationError("must be >= 1", "coherence.M")
        if half is None:
            raise ValidationError("coherence bins need an odd cycle", "coherence.M")
        if M > half:
            raise ValidationError(f"must not exceed s={half}", "coherence.M")
    elif half is not None:
        M = min(DEFAULT_M, half)

    stride = _parse_stride(raw.get("record_every", 1), half)
    return ExperimentConfig(
        run=run,
        coherence_M=M,
        reference_run=vals.get("reference_run", True),
        record_every=stride,
        write_distributions=vals.get("write_distributions", True),
        raw=dict(raw),
    )


def split_sweep(raw: dict) -> SweepSpec:
    base, axes = {}, {}
    for key, value in raw.items():
        if key.startswith("sweep."):
            target = key[len("sweep."):]
            if target not in KNOWN_KEYS:
                raise ValidationError("unknown sweep axis", key)
            if target in UNSWEEPABLE:
                raise ValidationError("this key cannot be swept", key)
            items = [v.strip() for v in str(value).split(",") if v.strip()]
            if not items:
                raise ValidationError("empty axis", key)
            axes[target] = [_coerce(target, v) for v in items]
        else:
            base[key] = value
    return SweepSpec(base=base, axes=axes)


def validate_config(text: str) -> ExperimentConfig:
    """Parse and validate a single-run config."""
    raw = parse_lines(text)
    if any(k.startswith("sweep.") for k in raw):
        raise ValidationError("sweep axes belong in a sweep config", next(k for k in raw if k.startswith("sweep.")))
    return build_config(raw)


def validate_sweep(text: str, cap: int = MAX_SWEEP_POINTS) -> SweepSpec:
    """Parse a sweep config and validate every grid point up front."""
    spec = split_sweep(parse_lines(text))
    for point in spec.points(cap):
        build_config({**spec.base, **point})
    return spec


def load(path: str | Path) -> str:
    return Path(path).read_text()
