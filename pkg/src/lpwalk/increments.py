"""Admissible step-coordinate laws and deterministic seeded sampling.

Every law is centered by construction, has positive variance, and finite
absolute moments of all orders, so any p >= 1 is admissible.  Coordinates
are sampled fully independent (a strict sub-case of uncorrelated).

Randomness comes from numpy's Philox counter-based generator keyed by
``(master_seed, replicate_index)``: distinct replicate indices give
independent streams whose draws do not depend on thread scheduling, and a
fixed key reproduces the identical bit stream on every platform numpy
supports.  Block draws of shape ``(b, d)`` consume the stream in the same
order as ``b`` successive draws of ``d`` values, which the walk engine
relies on to stream steps in blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic_limits import mp_closed_form
from .errors import ConfigurationError

__all__ = [
    "IncrementLaw",
    "SeedSpec",
    "centered_exponential",
    "law_abs_moment",
    "law_from_string",
    "law_sigma",
    "rademacher",
    "sample_xi_block",
    "scaled_rademacher",
    "standard_normal",
    "uniform_sym",
]

_SQRT3 = math.sqrt(3.0)
_MASK64 = 0xFFFFFFFFFFFFFFFF

_KINDS = ("rademacher", "uniform", "normal", "cexp")


@dataclass(frozen=True)
class IncrementLaw:
    """One of the built-in centered laws; ``scale`` only applies to rademacher."""

    kind: str
    scale: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ConfigurationError(
                f"unknown law {self.kind!r}; expected one of {', '.join(_KINDS)}"
            )
        if not (math.isfinite(self.scale) and self.scale > 0.0):
            raise ConfigurationError(f"law scale must be positive, got {self.scale}")
        if self.scale != 1.0 and self.kind != "rademacher":
            raise ConfigurationError(f"scale parameter is only supported for rademacher")

    @property
    def cli_name(self) -> str:
        if self.kind == "rademacher" and self.scale != 1.0:
            return f"rademacher:c={self.scale:g}"
        return self.kind

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Draw ``count`` i.i.d. values, advancing ``rng``."""
        if count < 1:
            raise ConfigurationError(f"count must be >= 1, got {count}")
        if self.kind == "rademacher":
            # Scaled variant consumes the identical stream as the unit one,
            # so c * xi draws are the unit draws scaled exactly.
            vals = rng.integers(0, 2, size=count).astype(np.float64) * 2.0 - 1.0
            return vals if self.scale == 1.0 else self.scale * vals
        if self.kind == "uniform":
            return rng.uniform(-_SQRT3, _SQRT3, size=count)
        if self.kind == "normal":
            return rng.standard_normal(count)
        return rng.standard_exponential(count) - 1.0


def rademacher() -> IncrementLaw:
    return IncrementLaw("rademacher")


def scaled_rademacher(c: float) -> IncrementLaw:
    return IncrementLaw("rademacher", scale=float(c))


def uniform_sym() -> IncrementLaw:
    """Uniform on [-sqrt(3), sqrt(3)]: centered with unit variance."""
    return IncrementLaw("uniform")


def standard_normal() -> IncrementLaw:
    return IncrementLaw("normal")


def centered_exponential() -> IncrementLaw:
    """Exp(1) - 1: centered, unit variance, skewness 2."""
    return IncrementLaw("cexp")


def law_from_string(name: str) -> IncrementLaw:
    """Parse a CLI law name: rademacher | uniform | normal | cexp | rademacher:c=<real>."""
    name = name.strip()
    if name.startswith("rademacher:"):
        param = name[len("rademacher:"):]
        if not param.startswith("c="):
            raise ConfigurationError(f"malformed law parameter {param!r}; expected c=<real>")
        try:
            c = float(param[2:])
        except ValueError:
            raise ConfigurationError(f"malformed law parameter {param!r}; expected c=<real>")
        return scaled_rademacher(c)
    return IncrementLaw(name)


def law_sigma(law: IncrementLaw) -> float:
    """Exact standard deviation of the law (closed form, not an estimate)."""
    if law.kind == "rademacher":
        return law.scale
    return 1.0


def law_abs_moment(law: IncrementLaw, q: float) -> float | None:
    """Closed-form E|xi|^q where the law admits one, else None.

    rademacher: c^q; uniform: sqrt(3)^q / (q+1); normal: the standard-normal
    absolute moment.  The centered exponential has no convenient closed form.
    """
    q = float(q)
    if not math.isfinite(q) or q < 0.0:
        raise ConfigurationError(f"moment order must be >= 0, got {q}")
    if law.kind == "rademacher":
        return law.scale**q
    if law.kind == "uniform":
        return _SQRT3**q / (q + 1.0)
    if law.kind == "normal":
        return mp_closed_form(q)
    return None


@dataclass(frozen=True)
class SeedSpec:
    """Key of one reproducible stream: (master seed, replicate index)."""

    master_seed: int
    replicate_index: int = 0

    def generator(self) -> np.random.Generator:
        """Fresh Philox generator positioned at the start of this stream."""
        key = np.array(
            [self.master_seed & _MASK64, self.replicate_index & _MASK64],
            dtype=np.uint64,
        )
        return np.random.Generator(np.random.Philox(key=key))

    def with_replicate(self, replicate_index: int) -> "SeedSpec":
        return SeedSpec(self.master_seed, replicate_index)


def sample_xi_block(
    law: IncrementLaw, count: int, stream: SeedSpec | np.random.Generator
) -> np.ndarray:
    """``count`` i.i.d. draws from ``law``.

    Passing a SeedSpec is pure: the same (law, count, stream) always returns
    the identical block.  Passing a Generator advances it, which is how the
    walk engine consumes successive blocks of one replicate stream.
    """
    rng = stream.generator() if isinstance(stream, SeedSpec) else stream
    return law.sample(count, rng)
