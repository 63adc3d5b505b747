"""Perturbation coefficients of the cubic-quadratic anharmonic oscillator.

The Hamiltonian is ``H = -1/2 d^2/dx^2 + 1/2 w^2 x^2 + 1/2 lam x^2 + s lam^2 x^3``
(``hbar = m = 1``, ``s`` the cubic switch).  Writing

    E_n(lam)  = sum_k E^(k) lam^k
    <x^N>     = sum_k A_N^(k) lam^k

the hypervirial relation

    E <x^N> = (lam + w^2) (N+2)/(2(N+1)) <x^{N+2}>
              + s lam^2 (2N+5)/(2(N+1)) <x^{N+3}> - N(N-1)/8 <x^{N-2}>

is expanded order by order in ``lam`` and solved for the highest moment
index, while Hellmann-Feynman gives ``k E^(k) = 1/2 A_2^(k-1) + 2 s A_3^(k-2)``.
Odd moments are seeded from the force identity ``<V'(x)> = 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Mapping, Sequence

from . import arith
from .arith import DomainError, EXACT


class SequencingError(RuntimeError):
    """A recurrence step asked for an entry that has not been computed yet."""


@dataclass(frozen=True)
class ModelSpec:
    """Physical problem and numerical settings for one eigenstate.

    ``lam`` is not part of the spec; it is supplied when a series or an
    approximant is evaluated.
    """

    omega: object = 1
    n: int = 0
    cubic_switch: int = 1
    max_order: int = 8
    arithmetic_mode: str = EXACT

    def __post_init__(self):
        arith.check_mode(self.arithmetic_mode)
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 0:
            raise DomainError(f"n must be a non-negative integer, got {self.n!r}")
        if self.cubic_switch not in (0, 1) or isinstance(self.cubic_switch, bool):
            raise DomainError(f"cubic_switch must be 0 or 1, got {self.cubic_switch!r}")
        if isinstance(self.max_order, bool) or not isinstance(self.max_order, int) or self.max_order < 1:
            raise DomainError(f"max_order must be a positive integer, got {self.max_order!r}")
        w = arith.convert(self.omega, self.arithmetic_mode)
        if not w > 0:
            raise DomainError(f"omega must be positive, got {self.omega!r}")
        object.__setattr__(self, "omega", w)


def moment_extent(max_order: int) -> Callable[[int], int]:
    """Largest moment index kept at each order: ``k -> K - k + 3``.

    Only the cubic term raises the moment index (by one per two orders), so a
    slope-one bound dominates all dependencies.
    """
    return lambda k: max_order - k + 3


class CoefficientTable:
    """Triangular table of moment coefficients ``A_N^(k)``.

    Entries outside the physical index range (``N < 0`` or ``k < 0``) read as
    zero.  Entries inside the range that were never stored raise
    :class:`SequencingError`, which guards the build order.
    """

    def __init__(self, mode: str, n_max_rule: Callable[[int], int]):
        self.mode = arith.check_mode(mode)
        self.n_max_rule = n_max_rule
        self._entries: dict[tuple[int, int], object] = {}
        self._frozen = False

    def get(self, N: int, k: int):
        if N < 0 or k < 0:
            return arith.zero(self.mode)
        try:
            return self._entries[(N, k)]
        except KeyError:
            raise SequencingError(f"A_{N}^({k}) requested before it was computed") from None

    def __getitem__(self, key: tuple[int, int]):
        return self.get(*key)

    def __contains__(self, key) -> bool:
        return key in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def set(self, N: int, k: int, value) -> None:
        if self._frozen:
            raise TypeError("coefficient table is frozen")
        self._entries[(N, k)] = value

    def freeze(self) -> "CoefficientTable":
        self._frozen = True
        return self

    @property
    def entries(self) -> Mapping[tuple[int, int], object]:
        return MappingProxyType(self._entries)

    def orders(self) -> list[int]:
        return sorted({k for _, k in self._entries})


@dataclass(frozen=True)
class EnergySeries:
    """Energy coefficients ``E^(0..K)`` of one eigenstate."""

    coefficients: tuple
    spec: ModelSpec = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, k):
        return self.coefficients[k]

    def __iter__(self):
        return iter(self.coefficients)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def as_ratios(self) -> list[tuple[int, int]]:
        """Exact ``(numerator, denominator)`` pairs; rational mode only."""
        if self.spec.arithmetic_mode != EXACT:
            raise DomainError("integer ratios are only available in exact-rational mode")
        return [(c.numerator, c.denominator) for c in self.coefficients]


def unperturbed_energy(n: int, omega, mode: str = EXACT):
    """Harmonic level ``omega (n + 1/2)``."""
    w = arith.convert(omega, mode)
    if not w > 0:
        raise DomainError(f"omega must be positive, got {omega!r}")
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n!r}")
    return w * (2 * n + 1) / 2


def _hv_coefficients(M: int, mode: str):
    # (M+2)/(2(M+1)) and (2M+5)/(2(M+1)) of the hypervirial relation at index M
    c2 = arith.convert(Fraction(M + 2, 2 * (M + 1)), mode)
    c3 = arith.convert(Fraction(2 * M + 5, 2 * (M + 1)), mode)
    return c2, c3


def harmonic_moment_table(spec: ModelSpec, n_max: int) -> CoefficientTable:
    """Order-zero moments ``<x^N>`` of the harmonic eigenstate ``n``.

    Stepped upward from ``<x^0> = 1``:
    ``A_{N+2} = 2(N+1)/((N+2) w^2) * (E0 A_N + N(N-1)/8 A_{N-2})``.
    """
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    mode = spec.arithmetic_mode
    table = CoefficientTable(mode, lambda k: n_max if k == 0 else -1)
    w2 = spec.omega * spec.omega
    e0 = unperturbed_energy(spec.n, spec.omega, mode)
    table.set(0, 0, arith.one(mode))
    if n_max >= 1:
        table.set(1, 0, arith.zero(mode))
    for N in range(0, n_max - 1):
        c2, _ = _hv_coefficients(N, mode)
        rhs = e0 * table.get(N, 0) + arith.convert(Fraction(N * (N - 1), 8), mode) * table.get(N - 2, 0)
        table.set(N + 2, 0, rhs / (c2 * w2))
    return table


def seed_odd_moment(k: int, table: CoefficientTable, spec: ModelSpec):
    """``A_1^(k)`` from ``<V'(x)> = 0``.

    Order ``k`` of ``(w^2 + lam) <x> + 3 s lam^2 <x^2> = 0`` gives
    ``w^2 A_1^(k) = -A_1^(k-1) - 3 s A_2^(k-2)``.
    """
    if k < 0:
        raise DomainError("order must be non-negative")
    acc = table.get(1, k - 1)
    if spec.cubic_switch:
        acc = acc + 3 * table.get(2, k - 2)
    value = -acc / (spec.omega * spec.omega)
    table.set(1, k, value)
    return value


def energy_coefficient(k: int, table: CoefficientTable, spec: ModelSpec):
    """Hellmann-Feynman step ``E^(k) = (A_2^(k-1)/2 + 2 s A_3^(k-2)) / k``."""
    if k < 1:
        raise DomainError("energy_coefficient needs k >= 1; use unperturbed_energy for k = 0")
    acc = table.get(2, k - 1) / 2
    if spec.cubic_switch:
        acc = acc + 2 * table.get(3, k - 2)
    return acc / k


def moment_coefficient(N: int, k: int, table: CoefficientTable, energies: Sequence, spec: ModelSpec):
    """Solve the order-``k`` hypervirial identity at index ``N - 2`` for ``A_N^(k)``.

    ``energies`` must hold ``E^(0..k)``.  The result is stored in ``table``.
    """
    if N < 2:
        raise DomainError("moment_coefficient handles N >= 2; A_0 and A_1 are seeded")
    if len(energies) < k + 1:
        raise SequencingError(f"E^({k}) is needed for A_{N}^({k})")
    mode = spec.arithmetic_mode
    M = N - 2
    c2, c3 = _hv_coefficients(M, mode)
    acc = arith.zero(mode)
    for j in range(k + 1):
        acc += energies[j] * table.get(M, k - j)
    acc += arith.convert(Fraction(M * (M - 1), 8), mode) * table.get(M - 2, k)
    acc -= c2 * table.get(N, k - 1)
    if spec.cubic_switch:
        acc -= c3 * table.get(N + 1, k - 2)
    value = acc / (c2 * spec.omega * spec.omega)
    table.set(N, k, value)
    return value


def compute_series(spec: ModelSpec) -> tuple[EnergySeries, CoefficientTable]:
    """Run the hierarchy through order ``spec.max_order``.

    At each order the energy comes first, then ``A_0``, ``A_1`` and the even
    and odd moments up to ``K - k + 3``.
    """
    mode = spec.arithmetic_mode
    K = spec.max_order
    extent = moment_extent(K)
    table = CoefficientTable(mode, extent)
    energies: list = []
    for k in range(K + 1):
        if k == 0:
            energies.append(unperturbed_energy(spec.n, spec.omega, mode))
        else:
            energies.append(energy_coefficient(k, table, spec))
        table.set(0, k, arith.one(mode) if k == 0 else arith.zero(mode))
        seed_odd_moment(k, table, spec)
        for N in range(2, extent(k) + 1):
            moment_coefficient(N, k, table, energies, spec)
    return EnergySeries(tuple(energies), spec), table.freeze()


def hypervirial_residual(N: int, k: int, table: CoefficientTable, energies: Sequence, spec: ModelSpec):
    """Order-``k`` coefficient of ``lhs - rhs`` of the hypervirial relation at index ``N``."""
    mode = spec.arithmetic_mode
    c2, c3 = _hv_coefficients(N, mode)
    lhs = arith.zero(mode)
    for j in range(k + 1):
        lhs += energies[j] * table.get(N, k - j)
    rhs = spec.omega * spec.omega * c2 * table.get(N + 2, k) + c2 * table.get(N + 2, k - 1)
    if spec.cubic_switch:
        rhs += c3 * table.get(N + 3, k - 2)
    rhs -= arith.convert(Fraction(N * (N - 1), 8), mode) * table.get(N - 2, k)
    return lhs - rhs


def partial_sum(series: EnergySeries, lam: float, m: int | None = None) -> float:
    """``sum_{k<=m} E^(k) lam^k`` in double precision (Horner)."""
    if m is None:
        m = series.order
    if m > series.order or m < 0:
        raise DomainError(f"order {m} outside 0..{series.order}")
    total = 0.0
    for c in reversed(series.coefficients[: m + 1]):
        total = total * lam + float(c)
    return total


def eq13_reference(n: int, omega: float, lam: float) -> float:
    """Published fourth-order closed form, evaluated term by term as printed.

    Its third- and fourth-order brackets disagree with the recurrence, so this
    is a comparison column only.
    """
    if not omega > 0:
        raise DomainError("omega must be positive")
    w = float(omega)
    h = n + 0.5
    sq = 4 * n * n + 4 * n + 1
    return (
        w * h
        + lam / (2 * w) * h
        - lam**2 / (8 * w**3) * h
        - lam**3 / w**4 * (5 / (96 * w) * (2 * n + 1) + 2 / 3 * sq)
        + lam**4 / (4 * w**4)
        * (25 / (96 * w**3) * h + 23 / (12 * w**2) * sq + 7 / 2 * (2 * n * n + 2 * n + 1))
    )
