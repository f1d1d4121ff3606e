"""Scalar arithmetic in two modes: exact rationals or tolerant floats.

Every distance, coefficient and norm in the package is a `Scalar`:
a `fractions.Fraction` in exact mode, or a `float` in float mode.
A `Mode` bundles the choice with the comparison tolerance and supplies
every comparison the rest of the package is allowed to perform, so that
"equal", "less or equal" and "strictly less" mean one consistent thing
per computation.

Exact mode is the default.  Certificates produced in exact mode are
absolute: no tolerance is ever consulted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import StructuralError

Scalar = Union[Fraction, float]


@dataclass(frozen=True)
class Mode:
    """Arithmetic mode: ``exact`` rationals, or ``float`` with tolerance."""

    kind: str = "exact"
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.kind not in ("exact", "float"):
            raise StructuralError(f"unknown arithmetic mode {self.kind!r}")
        if self.kind == "float" and not self.tolerance > 0:
            raise StructuralError("float mode requires a positive tolerance")

    @property
    def exact(self) -> bool:
        return self.kind == "exact"

    def zero(self) -> Scalar:
        return Fraction(0) if self.exact else 0.0

    def one(self) -> Scalar:
        return Fraction(1) if self.exact else 1.0

    def parse(self, value) -> Scalar:
        """Convert a JSON-ish value (int, "p/q" string, float) to a Scalar.

        Floats are read through their decimal representation, so 1.5
        parses to 3/2 in exact mode.  Booleans are rejected.
        """
        if isinstance(value, bool):
            raise StructuralError(f"not a scalar: {value!r}")
        if isinstance(value, Fraction):
            q = value
        elif isinstance(value, int):
            q = Fraction(value)
        elif isinstance(value, float):
            try:
                q = Fraction(repr(value))
            except (ValueError, OverflowError) as exc:
                raise StructuralError(f"not a finite scalar: {value!r}") from exc
        elif isinstance(value, str):
            try:
                q = Fraction(value.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise StructuralError(f"not a rational literal: {value!r}") from exc
        else:
            raise StructuralError(f"not a scalar: {value!r}")
        return q if self.exact else float(q)

    def format(self, s: Scalar):
        """Canonical JSON form: rationals as strings, floats as numbers."""
        if isinstance(s, Fraction):
            return str(s)
        return float(s)

    # Comparisons.  Float mode treats values within `tolerance` as equal.

    def eq(self, a: Scalar, b: Scalar) -> bool:
        if self.exact:
            return a == b
        return abs(a - b) <= self.tolerance

    def le(self, a: Scalar, b: Scalar) -> bool:
        if self.exact:
            return a <= b
        return a <= b + self.tolerance

    def lt(self, a: Scalar, b: Scalar) -> bool:
        if self.exact:
            return a < b
        return a < b - self.tolerance

    def is_zero(self, a: Scalar) -> bool:
        return self.eq(a, self.zero())

    def close_rel(self, a: Scalar, b: Scalar) -> bool:
        """Equality downgraded to |a-b| <= tol*(1+|b|) in float mode."""
        if self.exact:
            return a == b
        return abs(a - b) <= self.tolerance * (1 + abs(b))


EXACT = Mode()


def float_mode(tolerance: float = 1e-9) -> Mode:
    return Mode("float", tolerance)
