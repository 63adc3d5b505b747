"""Scalar fields used by the coefficient engine.

Two modes are supported: exact rationals (``fractions.Fraction``) and a
113-bit binary float carried by a private mpmath context, which leaves the
global ``mpmath.mp`` precision untouched.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Real

import mpmath

EXACT = "exact-rational"
FLOAT = "extended-float"
MODES = (EXACT, FLOAT)

#: significand bits of the extended-float mode (IEEE binary128)
FLOAT_BITS = 113

_ctx = mpmath.MPContext()
_ctx.prec = FLOAT_BITS


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise DomainError(f"unknown arithmetic mode {mode!r}; expected one of {MODES}")
    return mode


def to_fraction(value) -> Fraction:
    """Convert ``value`` to an exact rational.

    Floats go through their shortest repr, so ``0.1`` becomes ``1/10`` rather
    than the binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError("booleans are not numbers here")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise DomainError(f"{value!r} is not a finite rational")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"{value!r} is not a ratio of integers") from exc
    if isinstance(value, _ctx.mpf):
        return _mpf_to_fraction(value)
    if isinstance(value, Real):
        return Fraction(value)
    raise DomainError(f"cannot represent {value!r} exactly")


def _mpf_to_fraction(value) -> Fraction:
    man, exp = _ctx.mpf(value).man_exp
    if exp >= 0:
        return Fraction(int(man) << exp)
    return Fraction(int(man), 1 << -exp)


def to_mpf(value):
    """Convert ``value`` to a 113-bit float in the private context."""
    if isinstance(value, Fraction):
        return _ctx.mpf(value.numerator) / value.denominator
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            return to_mpf(Fraction(text))
        return _ctx.mpf(text)
    return _ctx.mpf(value)


def convert(value, mode: str):
    """Coerce ``value`` into the scalar type of ``mode``."""
    return to_fraction(value) if mode == EXACT else to_mpf(value)


def zero(mode: str):
    return Fraction(0) if mode == EXACT else _ctx.mpf(0)


def one(mode: str):
    return Fraction(1) if mode == EXACT else _ctx.mpf(1)


def sqrt(value):
    """Square root in the extended-float context (used by tests and oracles)."""
    return _ctx.sqrt(to_mpf(value))
