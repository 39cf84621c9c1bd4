"""Tiny exact affine expressions over named symbols.

Enough for the symbolic work this package needs (probability entries that
are affine in a handful of free parameters); not a computer algebra system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .model import format_rational


@dataclass(frozen=True)
class AffineExpr:
    """const + sum(coeffs[s] * s) with exact rational coefficients."""

    coeffs: tuple[tuple[str, Fraction], ...]
    const: Fraction

    @classmethod
    def of(cls, const=0, **coeffs) -> "AffineExpr":
        return cls(
            tuple(sorted((s, Fraction(v)) for s, v in coeffs.items() if Fraction(v) != 0)),
            Fraction(const),
        )

    @classmethod
    def sym(cls, name: str) -> "AffineExpr":
        return cls.of(**{name: 1})

    @property
    def coeff_map(self) -> dict[str, Fraction]:
        return dict(self.coeffs)

    def __add__(self, other):
        other = _coerce(other)
        merged = self.coeff_map
        for s, v in other.coeffs:
            merged[s] = merged.get(s, Fraction(0)) + v
        return AffineExpr.of(self.const + other.const, **merged)

    __radd__ = __add__

    def __neg__(self):
        return AffineExpr.of(-self.const, **{s: -v for s, v in self.coeffs})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        return AffineExpr.of(self.const * scalar, **{s: v * scalar for s, v in self.coeffs})

    __rmul__ = __mul__

    def substitute(self, values: Mapping[str, Fraction]) -> "AffineExpr":
        remaining = {}
        const = self.const
        for s, v in self.coeffs:
            if s in values:
                const += v * Fraction(values[s])
            else:
                remaining[s] = v
        return AffineExpr.of(const, **remaining)

    def value(self, values: Mapping[str, Fraction] | None = None) -> Fraction:
        result = self.substitute(values or {})
        if result.coeffs:
            free = [s for s, _ in result.coeffs]
            raise ValueError(f"expression still depends on {free}")
        return result.const

    def __str__(self):
        parts = [] if self.const == 0 and self.coeffs else [format_rational(self.const)]
        if self.const == 0 and self.coeffs:
            parts = []
        for s, v in self.coeffs:
            if v == 1:
                parts.append(f"+ {s}" if parts else s)
            elif v == -1:
                parts.append(f"- {s}" if parts else f"-{s}")
            else:
                sign = "+" if v > 0 else "-"
                mag = format_rational(abs(v))
                parts.append(f"{sign} {mag}*{s}" if parts else f"{format_rational(v)}*{s}")
        return " ".join(parts) if parts else "0"


def _coerce(value) -> AffineExpr:
    if isinstance(value, AffineExpr):
        return value
    return AffineExpr.of(Fraction(value))
