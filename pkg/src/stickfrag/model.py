"""Fragmentation models: proportion vectors, log-ratio exponents, rationality.

A model is an ordered vector of split proportions (p1, ..., pm) summing to 1.
Its Benford behaviour is governed entirely by the exponents
y_i = log_base(p_i / p_{i+1}): the stick lengths converge to strong Benford's
law iff at least one y_i is irrational.  Since irrationality is undecidable
from a float, classification is heuristic: exact rational inputs are accepted
as rational, and float inputs are searched for a close convergent by
continued fractions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Union

from .errors import ConfigError

# Verdict strings used across the package.
BENFORD = "Benford"
NON_BENFORD = "NonBenford"

NORMALIZATION_SLACK = 1e-12
DEFAULT_MAX_DENOMINATOR = 10**6
DEFAULT_TOLERANCE = 1e-13  # see README: must sit below 1/max_denominator**2

Exponent = Union[Fraction, float]


@dataclass(frozen=True)
class ProportionVector:
    """Fixed split proportions p1..pm, each in (0,1), summing to 1.

    Construction renormalizes by the sum when |sum - 1| <= 1e-12 and rejects
    anything further off.
    """

    p: tuple[float, ...]

    def __post_init__(self):
        p = tuple(float(x) for x in self.p)
        if len(p) < 2:
            raise ValueError(f"need at least 2 proportions, got {len(p)}")
        for x in p:
            if not (0.0 < x < 1.0) or not math.isfinite(x):
                raise ValueError(f"proportion {x} outside (0, 1)")
        total = math.fsum(p)
        if abs(total - 1.0) > NORMALIZATION_SLACK:
            raise ValueError(f"proportions sum to {total!r}, not 1 within {NORMALIZATION_SLACK}")
        if total != 1.0:
            p = tuple(x / total for x in p)
        object.__setattr__(self, "p", p)

    @property
    def m(self) -> int:
        return len(self.p)

    def permuted(self, order: tuple[int, ...]) -> "ProportionVector":
        return ProportionVector(tuple(self.p[i] for i in order))


@dataclass(frozen=True)
class ExponentSpec:
    """Exponents y_1..y_{m-1}, each an exact Fraction or a float, plus a base.

    Rational entries are kept exact so the non-Benford branch can be exercised
    without floating-point ambiguity.
    """

    y: tuple[Exponent, ...]
    base: int = 10

    def __post_init__(self):
        if not isinstance(self.base, int) or self.base < 2:
            raise ValueError(f"base must be an integer >= 2, got {self.base!r}")
        if len(self.y) < 1:
            raise ValueError("need at least one exponent")
        entries = []
        for e in self.y:
            if isinstance(e, Fraction):
                entries.append(e)
            elif isinstance(e, (int, float)):
                v = float(e)
                if not math.isfinite(v):
                    raise ValueError(f"exponent {e!r} is not finite")
                entries.append(v)
            else:
                raise TypeError(f"exponent must be Fraction or float, got {type(e).__name__}")
            try:
                ratio = math.pow(self.base, float(entries[-1]))
            except OverflowError:
                ratio = math.inf
            if ratio == 0.0 or not math.isfinite(ratio):
                raise ValueError(f"ratio base**{entries[-1]} leaves double range")
        object.__setattr__(self, "y", tuple(entries))

    @property
    def m(self) -> int:
        return len(self.y) + 1

    def values(self) -> tuple[float, ...]:
        """Exponents as plain floats."""
        return tuple(float(e) for e in self.y)


@dataclass(frozen=True)
class ExponentVerdict:
    """Per-exponent rationality verdict with the evidence that produced it."""

    rational: bool
    numerator: int | None
    denominator: int | None
    witness_numerator: int
    witness_denominator: int
    witness_error: float
    max_denominator: int
    tolerance: float

    def __post_init__(self):
        if self.rational:
            if self.denominator is None or self.denominator < 1:
                raise ValueError("rational verdict needs a positive denominator")
            if math.gcd(abs(self.numerator), self.denominator) != 1:
                raise ValueError("rational verdict must be in lowest terms")


@dataclass(frozen=True)
class ExponentClassification:
    """Rationality verdicts for all m-1 exponents of a model."""

    verdicts: tuple[ExponentVerdict, ...]
    max_denominator: int
    tolerance: float

    @property
    def all_rational(self) -> bool:
        return all(v.rational for v in self.verdicts)


def make_model(p: list[float] | tuple[float, ...]) -> ProportionVector:
    """Build the full m-vector from the m-1 free proportions.

    The last proportion is forced: pm = 1 - sum(p).
    """
    p = tuple(float(x) for x in p)
    if len(p) < 1:
        raise ValueError("need at least one free proportion")
    for x in p:
        if not (0.0 < x < 1.0):
            raise ValueError(f"proportion {x} outside (0, 1)")
    total = math.fsum(p)
    if total >= 1.0:
        raise ValueError(f"free proportions sum to {total}, must be < 1")
    return ProportionVector(p + (1.0 - total,))


def exponents_from_proportions(model: ProportionVector, base: int = 10) -> ExponentSpec:
    """y_i = log_base(p_i / p_{i+1}) for consecutive proportions."""
    if not isinstance(base, int) or base < 2:
        raise ValueError(f"base must be an integer >= 2, got {base!r}")
    y = []
    for a, b in zip(model.p, model.p[1:]):
        ratio = a / b
        y.append(math.log10(ratio) if base == 10 else math.log(ratio) / math.log(base))
    return ExponentSpec(tuple(y), base)


def proportions_from_exponents(spec: ExponentSpec) -> ProportionVector:
    """Invert exponents_from_proportions.

    With t_i = base**(y_i + ... + y_{m-1}), the unique normalized solution is
    pm = 1/(1 + sum t_i) and p_i = t_i * pm.
    """
    vals = spec.values()
    t = []
    suffix = 0.0
    for yv in reversed(vals):
        suffix += yv
        try:
            ti = math.pow(spec.base, suffix)
        except OverflowError:
            ti = math.inf
        if ti == 0.0 or not math.isfinite(ti):
            raise ValueError(f"ratio base**{suffix} leaves double range")
        t.append(ti)
    t.reverse()
    pm = 1.0 / (1.0 + math.fsum(t))
    if pm == 0.0 or not math.isfinite(pm):
        raise ValueError("exponents produce proportions outside double range")
    return ProportionVector(tuple(ti * pm for ti in t) + (pm,))


def _convergents(x: float, max_denominator: int, max_terms: int = 64):
    """Yield continued-fraction convergents (p, q, |x - p/q|) with q <= bound.

    Terminates when the expansion is exhausted (float x is rational), the
    denominator bound is passed, or max_terms partial quotients were consumed.
    """
    p0, q0 = 1, 0
    a = math.floor(x)
    p1, q1 = a, 1
    yield p1, q1, abs(x - p1)
    rem = x - a
    for _ in range(max_terms):
        if rem == 0.0:
            return
        inv = 1.0 / rem
        a = math.floor(inv)
        if a > max_denominator * 2:  # next denominator certainly past the bound
            return
        rem = inv - a
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1 > max_denominator:
            return
        yield p1, q1, abs(x - p1 / q1)


def classify_rationality(
    spec: ExponentSpec,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
    tolerance: float = DEFAULT_TOLERANCE,
) -> ExponentClassification:
    """Classify each exponent as Rational(a, b) or presumed irrational.

    Exact Fraction entries are rational by construction.  Float entries are
    expanded by continued fractions; the first convergent with denominator
    <= max_denominator and error <= tolerance wins.  If none qualifies the
    entry is presumed irrational and the best convergent found is kept as a
    witness.  Deterministic.
    """
    if max_denominator < 1:
        raise ValueError("max_denominator must be >= 1")
    if not (tolerance > 0.0):
        raise ValueError("tolerance must be > 0")
    verdicts = []
    for entry in spec.y:
        if isinstance(entry, Fraction):
            verdicts.append(
                ExponentVerdict(
                    rational=True,
                    numerator=entry.numerator,
                    denominator=entry.denominator,
                    witness_numerator=entry.numerator,
                    witness_denominator=entry.denominator,
                    witness_error=0.0,
                    max_denominator=max_denominator,
                    tolerance=tolerance,
                )
            )
            continue
        best: tuple[int, int, float] | None = None
        hit: tuple[int, int, float] | None = None
        for p, q, err in _convergents(float(entry), max_denominator):
            if best is None or err < best[2]:
                best = (p, q, err)
            if err <= tolerance:
                hit = (p, q, err)
                break
        if hit is not None:
            p, q, err = hit
            verdicts.append(
                ExponentVerdict(
                    rational=True,
                    numerator=p,
                    denominator=q,
                    witness_numerator=p,
                    witness_denominator=q,
                    witness_error=err,
                    max_denominator=max_denominator,
                    tolerance=tolerance,
                )
            )
        else:
            p, q, err = best
            verdicts.append(
                ExponentVerdict(
                    rational=False,
                    numerator=None,
                    denominator=None,
                    witness_numerator=p,
                    witness_denominator=q,
                    witness_error=err,
                    max_denominator=max_denominator,
                    tolerance=tolerance,
                )
            )
    return ExponentClassification(tuple(verdicts), max_denominator, tolerance)


def predict_benford(classification: ExponentClassification) -> str:
    """Theorem-level prediction: Benford iff some exponent is irrational."""
    return NON_BENFORD if classification.all_rational else BENFORD


# ---------------------------------------------------------------------------
# Model configuration files

def parse_config(data: dict) -> tuple[ProportionVector, ExponentSpec]:
    """Parse a model configuration dict.

    Exactly one of "proportions" (the m-1 free proportions handed to
    make_model) or "exponents" (a list of {"rational": [a, b]} or
    {"real": x} entries, with optional "base") must be present.
    """
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    has_p = "proportions" in data
    has_y = "exponents" in data
    if has_p == has_y:
        raise ConfigError('config must contain exactly one of "proportions" or "exponents"')
    base = data.get("base", 10)
    if not isinstance(base, int) or base < 2:
        raise ConfigError(f'"base" must be an integer >= 2, got {base!r}')
    if has_p:
        raw = data["proportions"]
        if not isinstance(raw, list) or not raw:
            raise ConfigError('"proportions" must be a non-empty list')
        try:
            model = make_model([float(x) for x in raw])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad proportions: {exc}") from exc
        return model, exponents_from_proportions(model, base)
    raw = data["exponents"]
    if not isinstance(raw, list) or not raw:
        raise ConfigError('"exponents" must be a non-empty list')
    entries: list[Exponent] = []
    for item in raw:
        if isinstance(item, dict) and set(item) == {"rational"}:
            pair = item["rational"]
            if not (isinstance(pair, list) and len(pair) == 2):
                raise ConfigError(f'"rational" entry must be [numerator, denominator], got {pair!r}')
            a, b = pair
            if not isinstance(a, int) or not isinstance(b, int) or b == 0:
                raise ConfigError(f"bad rational pair {pair!r}")
            entries.append(Fraction(a, b))
        elif isinstance(item, dict) and set(item) == {"real"}:
            v = item["real"]
            if not isinstance(v, (int, float)):
                raise ConfigError(f'"real" entry must be a number, got {v!r}')
            entries.append(float(v))
        else:
            raise ConfigError(f"exponent entry must be {{'rational': [a, b]}} or {{'real': x}}, got {item!r}")
    try:
        spec = ExponentSpec(tuple(entries), base)
        model = proportions_from_exponents(spec)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad exponents: {exc}") from exc
    return model, spec


def load_config(path: str | Path) -> tuple[ProportionVector, ExponentSpec]:
    """Load and parse a JSON model configuration file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(data)
