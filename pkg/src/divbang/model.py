"""Model parameters, claim laws and the uncontrolled two-branch surplus.

The surplus of the two branches is driven by one compound Poisson claim
process: branch i collects premium at rate ``c_i`` and covers the fixed
proportion ``b_i`` of every claim, so

    X_i(t) = x_i + c_i * t - b_i * (U_1 + ... + U_{N(t)}),

with N a Poisson process of intensity ``lam`` and U_n i.i.d. claim sizes.
The company is solvent as long as at least one branch is non-negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .streams import RandomSource

#: tolerance for the claim-share sum check b1 + b2 = 1
B_SUM_TOL = 1e-12


class ParamError(ValueError):
    """A model parameter violates the standing model assumptions."""


class ClaimShareSumError(ParamError):
    """b1 + b2 differs from 1 by more than the validation tolerance."""


class ProfitabilityOrderError(ParamError):
    """c1/b1 < c2/b2: branch two must be equally or less profitable."""


class NonPositiveParamError(ParamError):
    """A parameter that must be strictly positive is not."""


class ConfigError(ValueError):
    """A parameter config file is malformed."""


class InsolventStateError(ValueError):
    """Both branch surpluses are strictly negative."""


@dataclass(frozen=True)
class ModelParams:
    """Immutable parameter set of the two-branch risk model.

    Attributes:
        c1, c2: premium rates (currency per unit time), strictly positive.
        b1, b2: claim proportions covered by each branch; b1 + b2 = 1.
        lam: claim arrival intensity (per unit time), strictly positive.
        gamma: rate of the exponential claim-size law (per currency unit).
        q: discount rate (per unit time), strictly positive.

    The branches are ordered so that branch two is equally or less
    profitable per unit of claim exposure: c1/b1 >= c2/b2.
    """

    c1: float
    c2: float
    b1: float
    b2: float
    lam: float
    gamma: float
    q: float

    def __post_init__(self):
        validate_params(self)
        # Recompute b2 = 1 - b1 so claim jumps are exactly colinear with
        # (b1, b2); the D1/D2 region logic relies on exact colinearity.
        object.__setattr__(self, "b2", 1.0 - self.b1)


def validate_params(p: ModelParams) -> ModelParams:
    """Check the model assumptions, returning ``p`` unchanged if they hold.

    Raises:
        NonPositiveParamError: some field is not strictly positive.
        ClaimShareSumError: b1 + b2 deviates from 1 beyond ``B_SUM_TOL``.
        ProfitabilityOrderError: c1/b1 < c2/b2.
    """
    for name in ("c1", "c2", "b1", "b2", "lam", "gamma", "q"):
        value = getattr(p, name)
        if not (value > 0.0) or math.isinf(value) or math.isnan(value):
            raise NonPositiveParamError(f"{name} must be strictly positive and finite, got {value!r}")
    if abs(p.b1 + p.b2 - 1.0) > B_SUM_TOL:
        raise ClaimShareSumError(f"claim shares must sum to 1, got b1 + b2 = {p.b1 + p.b2!r}")
    # Cross-multiplied form avoids spurious failures from the divisions.
    if p.c1 * p.b2 < p.c2 * p.b1:
        raise ProfitabilityOrderError(
            f"branch one must be at least as profitable: c1/b1 = {p.c1 / p.b1:g} < c2/b2 = {p.c2 / p.b2:g}"
        )
    return p


@dataclass(frozen=True)
class SurplusPoint:
    """A point (x1, x2) of branch surpluses; either coordinate may be negative."""

    x1: float
    x2: float

    @property
    def solvent(self) -> bool:
        """True unless both coordinates are strictly negative."""
        return not (self.x1 < 0.0 and self.x2 < 0.0)

    def require_solvent(self) -> "SurplusPoint":
        if not self.solvent:
            raise InsolventStateError(f"({self.x1}, {self.x2}) has both branches negative")
        return self


class ClaimDistribution:
    """Law of the i.i.d. nonnegative claim sizes.

    Subclasses supply ``sample`` (one draw from a RandomSource) and ``cdf``.
    The only shipped law is exponential; the simulator is written against
    this interface so other light-tailed laws can be plugged in.
    """

    def sample(self, rng: RandomSource) -> float:
        raise NotImplementedError

    def cdf(self, alpha: float) -> float:
        raise NotImplementedError

    def mean(self) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class ExponentialClaims(ClaimDistribution):
    """Exponential claim sizes with rate ``gamma`` (mean 1/gamma)."""

    gamma: float

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise NonPositiveParamError(f"gamma must be strictly positive, got {self.gamma!r}")

    def ppf(self, u: float) -> float:
        """Inverse cdf: -log(1-u)/gamma for u in [0, 1)."""
        if not 0.0 <= u < 1.0:
            raise ValueError(f"u must lie in [0, 1), got {u!r}")
        return -math.log1p(-u) / self.gamma

    def sample(self, rng: RandomSource) -> float:
        return rng.exponential(self.gamma)

    def cdf(self, alpha: float) -> float:
        if alpha <= 0.0:
            return 0.0
        return -math.expm1(-self.gamma * alpha)

    def mean(self) -> float:
        return 1.0 / self.gamma


def sample_claim(dist: ClaimDistribution, rng: RandomSource) -> float:
    """Draw one claim size from ``dist`` using ``rng``."""
    return dist.sample(rng)


def uncontrolled_surplus(
    p: ModelParams,
    x0: SurplusPoint,
    claims: Sequence[tuple[float, float]],
    t: float,
) -> SurplusPoint:
    """Evaluate the uncontrolled surplus at time ``t``.

    ``claims`` is a sequence of (arrival_time, size) pairs with strictly
    increasing arrival times; claims with arrival <= t are applied.
    """
    if t < 0.0:
        raise ValueError(f"t must be non-negative, got {t!r}")
    total = 0.0
    last = -math.inf
    for arrival, size in claims:
        if arrival <= last:
            raise ValueError("claim arrival times must be strictly increasing")
        last = arrival
        if arrival <= t:
            total += size
    return SurplusPoint(
        x0.x1 + p.c1 * t - p.b1 * total,
        x0.x2 + p.c2 * t - p.b2 * total,
    )


_CONFIG_KEYS = ("c1", "c2", "b1", "b2", "lambda", "gamma", "q")


def parse_config(text: str) -> ModelParams:
    """Parse a flat key=value parameter config.

    Recognized keys: c1, c2, b1, b2, lambda, gamma, q (each exactly once).
    Blank lines and ``#`` comments are ignored; unknown keys are errors.
    """
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = float(val.strip())
        except ValueError:
            raise ConfigError(f"line {lineno}: invalid number for {key!r}: {val.strip()!r}") from None
    missing = [k for k in _CONFIG_KEYS if k not in values]
    if missing:
        raise ConfigError(f"missing keys: {', '.join(missing)}")
    return ModelParams(
        c1=values["c1"],
        c2=values["c2"],
        b1=values["b1"],
        b2=values["b2"],
        lam=values["lambda"],
        gamma=values["gamma"],
        q=values["q"],
    )


def load_params(path: str | Path) -> ModelParams:
    """Read and parse a key=value parameter config file."""
    return parse_config(Path(path).read_text())


def claim_stream(
    p: ModelParams, rng: RandomSource, dist: ClaimDistribution | None = None
) -> Iterable[tuple[float, float]]:
    """Infinite iterator of (inter-arrival time, claim size) pairs.

    Inter-arrivals are Exp(lam) via inverse cdf; sizes come from ``dist``
    (exponential with the model's gamma when None). The draw order -- one
    uniform for the arrival, then the size -- is part of the reproducibility
    contract shared with the compiled kernel.
    """
    if dist is None:
        dist = ExponentialClaims(p.gamma)
    while True:
        dt = rng.exponential(p.lam)
        size = dist.sample(rng)
        yield dt, size
