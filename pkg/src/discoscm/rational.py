"""Probability scalars carried as exact rationals.

Model probabilities are normalized to ``fractions.Fraction`` on entry:
ints and "p/q" strings directly, floats through their shortest decimal
repr (so 0.1 becomes 1/10, not the 0.1000000000000000055... binary
value).  All engine sums and products then stay exact whenever the
inputs were exact, which is what lets the test oracles compare with
zero tolerance.  Comparisons fall back to an absolute tolerance only
when a float slipped in.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Prob = Union[Fraction, float]

#: Absolute tolerance for float-valued probability comparisons.
PROB_TOL = 1e-12


def to_prob(value) -> Fraction:
    """Coerce a number (or "p/q" / decimal string) to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        try:
            return Fraction(repr(value))
        except (ValueError, OverflowError):
            return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a probability")


def prob_close(a: Prob, b: Prob, tol: float = PROB_TOL) -> bool:
    """Exact equality for rationals, absolute tolerance otherwise."""
    if isinstance(a, (Fraction, int)) and isinstance(b, (Fraction, int)):
        return a == b
    return abs(a - b) <= tol


def format_prob(value: Prob, digits: int = 12) -> str:
    """Render a probability with a fixed number of significant digits."""
    return f"{float(value):.{digits}g}"
