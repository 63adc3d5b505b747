"""[N, M] Padé approximants of an energy series, with pole diagnostics.

Orders follow the ``E[N, M]`` convention: ``N`` is the denominator degree and
``M`` the numerator degree, and the approximant is written
``E0 * (1 + p_1 lam + ... + p_M lam^M) / (1 + q_1 lam + ... + q_N lam^N)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import arith
from .arith import DomainError

#: denominators below this magnitude mark a value as pole-contaminated
DEFAULT_POLE_THRESHOLD = 1e-3


class DefectiveApproximant(ArithmeticError):
    """The [N, M] linear system has no solution, so the entry does not exist in normal form."""


class PoleAtEvaluationPoint(ZeroDivisionError):
    """The denominator vanishes exactly at the requested point."""


@dataclass(frozen=True)
class PadeApproximant:
    leading: object
    numerator: tuple
    denominator: tuple
    orders: tuple[int, int]

    @property
    def N(self) -> int:
        return self.orders[0]

    @property
    def M(self) -> int:
        return self.orders[1]

    def numerator_poly(self) -> tuple:
        """Coefficients ``(1, p_1, ..., p_M)``, lowest power first."""
        return (_one_like(self.leading),) + tuple(self.numerator)

    def denominator_poly(self) -> tuple:
        return (_one_like(self.leading),) + tuple(self.denominator)

    def __call__(self, lam):
        return evaluate_pade(self, lam)[0]


def _one_like(x):
    return Fraction(1) if isinstance(x, Fraction) else arith.to_mpf(1)


def _solve(matrix: list[list], rhs: list) -> list:
    """Gaussian elimination with full pivoting over any field.

    Pivots are tested against exact zero, which is exact for rationals.  A
    rank-deficient but consistent system gets its free unknowns set to zero
    (the lowest-degree denominator); an inconsistent one is defective.
    """
    n = len(rhs)
    a = [row[:] + [b] for row, b in zip(matrix, rhs)]
    cols = list(range(n))
    rank = n
    for step in range(n):
        best, pr, pc = None, None, None
        for i in range(step, n):
            for j in range(step, n):
                v = abs(a[i][j])
                if v != 0 and (best is None or v > best):
                    best, pr, pc = v, i, j
        if best is None:
            rank = step
            break
        a[step], a[pr] = a[pr], a[step]
        if pc != step:
            for row in a:
                row[step], row[pc] = row[pc], row[step]
            cols[step], cols[pc] = cols[pc], cols[step]
        piv = a[step][step]
        for i in range(step + 1, n):
            f = a[i][step] / piv
            if f != 0:
                for j in range(step, n + 1):
                    a[i][j] -= f * a[step][j]
    if any(a[i][n] != 0 for i in range(rank, n)):
        raise DefectiveApproximant("inconsistent denominator system")
    zero = rhs[0] - rhs[0]
    x = [zero] * n
    for i in reversed(range(rank)):
        acc = a[i][n]
        for j in range(i + 1, rank):
            acc -= a[i][j] * x[j]
        x[i] = acc / a[i][i]
    out = [zero] * n
    for pos, col in enumerate(cols):
        out[col] = x[pos]
    return out


def build_pade(series: Sequence, N: int, M: int) -> PadeApproximant:
    """Match ``series`` through order ``N + M``.

    ``series`` is any sequence of coefficients (an ``EnergySeries`` works);
    the leading one must be non-zero.
    """
    coeffs = list(series)
    if N < 0 or M < 0:
        raise DomainError("Padé orders must be non-negative")
    if len(coeffs) < N + M + 1:
        raise DomainError(f"[{N},{M}] needs {N + M + 1} coefficients, got {len(coeffs)}")
    lead = coeffs[0]
    if lead == 0:
        raise DomainError("leading coefficient must be non-zero")
    e = [c / lead for c in coeffs[: N + M + 1]]
    zero = e[0] - e[0]

    def ek(i):
        return e[i] if i >= 0 else zero

    if N:
        # sum_{j=1..N} q_j e_{k-j} = -e_k  for k = M+1..M+N
        mat = [[ek(k - j) for j in range(1, N + 1)] for k in range(M + 1, M + N + 1)]
        rhs = [-ek(k) for k in range(M + 1, M + N + 1)]
        q = _solve(mat, rhs)
    else:
        q = []
    qq = [e[0]] + q
    p = [sum((qq[j] * ek(i - j) for j in range(min(i, N) + 1)), zero) for i in range(1, M + 1)]
    return PadeApproximant(lead, tuple(p), tuple(q), (N, M))


def _horner(coeffs, x):
    acc = coeffs[-1] - coeffs[-1]
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _exact_arg(approx: PadeApproximant, lam):
    if isinstance(approx.leading, Fraction):
        return arith.to_fraction(lam) if not isinstance(lam, float) else Fraction(lam)
    return arith.to_mpf(lam)


def evaluate_pade(approx: PadeApproximant, lam) -> tuple[float, float]:
    """Return ``(value, |denominator(lam)|)``.

    Arithmetic is carried out in the approximant's own field (exactly, for
    rational coefficients) and rounded once at the end.
    """
    x = _exact_arg(approx, lam)
    den = _horner(approx.denominator_poly(), x)
    if den == 0:
        raise PoleAtEvaluationPoint(f"[{approx.N},{approx.M}] denominator vanishes at {lam!r}")
    num = _horner(approx.numerator_poly(), x)
    return float(approx.leading * num / den), abs(float(den))


def is_pole_contaminated(denominator_magnitude: float, threshold: float = DEFAULT_POLE_THRESHOLD) -> bool:
    return denominator_magnitude < threshold


def taylor_residuals(approx: PadeApproximant, series: Sequence) -> list:
    """``[leading * P - Q * E]_k`` for ``k = 0..N+M``; zero when the match holds."""
    order = approx.N + approx.M
    coeffs = list(series)
    if len(coeffs) < order + 1:
        raise DomainError(f"need {order + 1} coefficients, got {len(coeffs)}")
    P = approx.numerator_poly()
    Q = approx.denominator_poly()
    out = []
    for k in range(order + 1):
        lhs = approx.leading * P[k] if k < len(P) else approx.leading * 0
        rhs = sum((Q[j] * coeffs[k - j] for j in range(min(k, approx.N) + 1)), coeffs[0] * 0)
        out.append(lhs - rhs)
    return out


def real_poles_in(approx: PadeApproximant, lo: float, hi: float, samples: int = 20001) -> list[float]:
    """Real zeros of the denominator on ``[lo, hi]``.

    Sign changes on a uniform grid are refined by bisection to 1e-12.  Zeros
    of even multiplicity (no sign change) are not reported.
    """
    if not lo < hi:
        raise DomainError("need lo < hi")
    q = [float(c) for c in approx.denominator_poly()]
    if len(q) == 1:
        return []
    qrev = q[::-1]
    grid = np.linspace(lo, hi, max(samples, 10_001))
    vals = np.polyval(qrev, grid)
    roots = []
    for i in np.flatnonzero(vals == 0.0):
        roots.append(float(grid[i]))
    idx = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    for i in idx:
        a, b = float(grid[i]), float(grid[i + 1])
        fa = np.polyval(qrev, a)
        while b - a > 1e-12:
            mid = 0.5 * (a + b)
            fm = np.polyval(qrev, mid)
            if fm == 0.0:
                a = b = mid
                break
            if (fm < 0) == (fa < 0):
                a, fa = mid, fm
            else:
                b = mid
        roots.append(0.5 * (a + b))
    return sorted(roots)


def min_denominator(approx: PadeApproximant, lo: float, hi: float, samples: int = 20001) -> tuple[float, float]:
    """Location and value of ``min |Q(lam)|`` over a uniform grid on ``[lo, hi]``."""
    q = [float(c) for c in approx.denominator_poly()][::-1]
    grid = np.linspace(lo, hi, samples)
    vals = np.abs(np.polyval(q, grid))
    i = int(np.argmin(vals))
    return float(grid[i]), float(vals[i])
