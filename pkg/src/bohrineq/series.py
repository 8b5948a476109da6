"""Truncated multivariate power series and the closed-form function families.

A series lives on an n-dimensional polydisk and is stored as a sparse map
from multi-indices to complex coefficients, truncated at a total degree K.
The families implemented here are the disk automorphism type functions

    psi_a(z)            = (a - z) / (1 - a z)                    (n = 1)
    f_a(z), unit form   = (a - s) / (1 - a s),    s = z_1+...+z_n
    f_a(z), scaled form = (a - s/n) / (1 - a s/n)

together with finite Blaschke products and constants.  The unit form is
bounded by one on the polydisk of polyradius 1/n, every other family on the
unit polydisk.  All Moebius-type families admit exact geometric tail bounds,
which is what makes truncated evaluations certifiable.

Two independent expansion routes are provided: ``expand`` uses the
multinomial closed form of the coefficients, ``oracle_expand`` performs
formal power-series division from the numerator/denominator polynomials and
never touches the closed form.  Their coefficientwise agreement is a standing
test obligation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterator, Union

import numpy as np

from .errors import BudgetExceededError, DomainError

#: Hard cap on materialized coefficients for any single expansion.
DEFAULT_COEFF_BUDGET = 500_000

#: Target for certified majorant tails when a truncation degree is chosen
#: automatically, and the hard cap on that degree.
TAIL_TARGET = 1e-13
MAX_TRUNCATION = 200

#: Slack allowed on the boundedness check of the distinguished boundary.
TORUS_SLACK = 1e-9


# --------------------------------------------------------------------------
# Multi-indices
# --------------------------------------------------------------------------

@total_ordering
@dataclass(frozen=True)
class MultiIndex:
    """Exponent vector of one power-series monomial.

    Ordering is graded lexicographic (by total degree, then by the exponent
    tuple), which fixes a canonical iteration order for coefficient maps.
    """

    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if len(exps) == 0:
            raise DomainError("multi-index needs at least one exponent")
        if any(e < 0 for e in exps):
            raise DomainError(f"negative exponent in multi-index {exps}")
        object.__setattr__(self, "exponents", exps)

    @property
    def dimension(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def factorial(self) -> int:
        """alpha! = product of the factorials of the exponents."""
        out = 1
        for e in self.exponents:
            out *= math.factorial(e)
        return out

    def multinomial(self) -> int:
        """|alpha|! / alpha!, the number of monomial orderings."""
        return math.factorial(self.degree) // self.factorial()

    def __lt__(self, other: "MultiIndex") -> bool:
        return (self.degree, self.exponents) < (other.degree, other.exponents)


def multi_indices(n: int, degree: int) -> Iterator[MultiIndex]:
    """All multi-indices of the given dimension and exact total degree,
    in graded-lexicographic order."""
    for exps in _compositions(n, degree):
        yield MultiIndex(exps)


def _compositions(n: int, total: int) -> Iterator[tuple[int, ...]]:
    if n == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(n - 1, total - first):
            yield (first,) + rest


def coefficient_count(n: int, max_degree: int) -> int:
    """Number of multi-indices with degree <= max_degree in n variables."""
    return math.comb(max_degree + n, n)


# --------------------------------------------------------------------------
# Function families
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MoebiusDisk:
    """psi_a(z) = (a - z)/(1 - a z) on the unit disk, a in [0, 1)."""

    a: float

    def __post_init__(self):
        if not 0.0 <= self.a < 1.0:
            raise DomainError(f"Moebius parameter a={self.a} outside [0, 1)")


@dataclass(frozen=True)
class ExtremalPolydiskUnit:
    """f_a(z) = (a - s)/(1 - a s) with s = z_1 + ... + z_n.

    Natural domain is the polydisk of polyradius 1/n, where |s| < 1.
    """

    a: float
    n: int

    def __post_init__(self):
        if not 0.0 <= self.a < 1.0:
            raise DomainError(f"family parameter a={self.a} outside [0, 1)")
        if self.n < 1:
            raise DomainError("dimension n must be >= 1")


@dataclass(frozen=True)
class ExtremalPolydiskScaled:
    """f_a(z) = (a - s/n)/(1 - a s/n); bounded by one on the unit polydisk."""

    a: float
    n: int

    def __post_init__(self):
        if not 0.0 <= self.a < 1.0:
            raise DomainError(f"family parameter a={self.a} outside [0, 1)")
        if self.n < 1:
            raise DomainError("dimension n must be >= 1")


@dataclass(frozen=True)
class FiniteBlaschke:
    """Product of disk automorphism factors (w_j - z)/(1 - conj(w_j) z), n = 1."""

    zeros: tuple[complex, ...]

    def __post_init__(self):
        zs = tuple(complex(w) for w in self.zeros)
        if not zs:
            raise DomainError("Blaschke product needs at least one zero")
        if any(abs(w) >= 1.0 for w in zs):
            raise DomainError("Blaschke zeros must have modulus < 1")
        object.__setattr__(self, "zeros", zs)


@dataclass(frozen=True)
class ConstantFn:
    """Constant function z -> c with |c| <= 1."""

    c: complex

    def __post_init__(self):
        cc = complex(self.c)
        if abs(cc) > 1.0:
            raise DomainError(f"constant modulus {abs(cc)} exceeds 1")
        object.__setattr__(self, "c", cc)


FamilySpec = Union[
    MoebiusDisk, ExtremalPolydiskUnit, ExtremalPolydiskScaled, FiniteBlaschke, ConstantFn
]


def dimension(family: FamilySpec) -> int:
    if isinstance(family, (ExtremalPolydiskUnit, ExtremalPolydiskScaled)):
        return family.n
    return 1


def domain_radius_cap(family: FamilySpec) -> float:
    """Polyradius below which the family is defined and bounded by one."""
    if isinstance(family, ExtremalPolydiskUnit):
        return 1.0 / family.n
    return 1.0


def moebius_profile(family: FamilySpec) -> tuple[float, float] | None:
    """(a, sigma_scale) for Moebius-type families, else None.

    The family equals (a - u)/(1 - a u) where the argument u ranges over the
    disk of radius sigma = sigma_scale * bold_r when the polyradius is bold_r.
    All diagonal closed forms (majorant tail, slice area, boundary sup of |f|)
    are functions of (a, sigma) alone.
    """
    if isinstance(family, MoebiusDisk):
        return family.a, 1.0
    if isinstance(family, ExtremalPolydiskUnit):
        return family.a, float(family.n)
    if isinstance(family, ExtremalPolydiskScaled):
        return family.a, 1.0
    return None


def constant_term(family: FamilySpec) -> complex:
    """Value at the origin, the a_0 of the expansion."""
    if isinstance(family, (MoebiusDisk, ExtremalPolydiskUnit, ExtremalPolydiskScaled)):
        return complex(family.a)
    if isinstance(family, FiniteBlaschke):
        out = complex(1.0)
        for w in family.zeros:
            out *= w
        return out
    return family.c


def family_value(family: FamilySpec, z: tuple[complex, ...]) -> complex:
    """Exact rational evaluation at a point of the open domain."""
    n = dimension(family)
    if len(z) != n:
        raise DomainError(f"point has {len(z)} coordinates, family has dimension {n}")
    cap = domain_radius_cap(family)
    if any(abs(zi) >= cap for zi in z):
        raise DomainError(f"point outside the open polydisk of radius {cap}")
    if isinstance(family, ConstantFn):
        return family.c
    if isinstance(family, FiniteBlaschke):
        out = complex(1.0)
        for w in family.zeros:
            out *= (w - z[0]) / (1.0 - w.conjugate() * z[0])
        return out
    s = sum(z)
    if isinstance(family, ExtremalPolydiskScaled):
        s = s / family.n
    a = family.a
    return (a - s) / (1.0 - a * s)


# --------------------------------------------------------------------------
# Diagonal slice coefficients
# --------------------------------------------------------------------------

def slice_coefficients(family: FamilySpec, K: int) -> list[complex]:
    """Coefficients b_0..b_K of the univariate series in s = z_1 + ... + z_n.

    For Moebius-type families b_0 = a and b_k = -(1 - a^2) a^(k-1), scaled
    additionally by n^-k for the scaled family.  A Blaschke product (n = 1)
    returns its own Taylor coefficients; a constant returns (c, 0, ..., 0).
    """
    if K < 0:
        raise DomainError("truncation degree must be >= 0")
    if isinstance(family, FiniteBlaschke):
        series = expand(family, K)
        return [series.coefficient(MultiIndex((k,))) for k in range(K + 1)]
    if isinstance(family, ConstantFn):
        return [family.c] + [0j] * K
    a = family.a
    scale = family.n if isinstance(family, ExtremalPolydiskScaled) else 1
    out: list[complex] = [complex(a)]
    for k in range(1, K + 1):
        out.append(complex(-(1.0 - a * a) * a ** (k - 1) / scale**k))
    return out


# --------------------------------------------------------------------------
# Coefficient series
# --------------------------------------------------------------------------

_ZERO_CACHE: dict[int, MultiIndex] = {}


def _zero_index(n: int) -> MultiIndex:
    if n not in _ZERO_CACHE:
        _ZERO_CACHE[n] = MultiIndex((0,) * n)
    return _ZERO_CACHE[n]


@dataclass(frozen=True)
class CoefficientSeries:
    """Sparse truncated power series: coefficients of degree <= truncation.

    Instances are immutable after construction; the coefficient map must be
    treated as read-only.  ``source`` records the generating family when the
    series came from an expansion, which is what enables certified tail
    bounds; hand-built series carry no certificate.
    """

    n: int
    truncation: int
    coeffs: dict[MultiIndex, complex]
    source: FamilySpec | None = None

    def __post_init__(self):
        for idx in self.coeffs:
            if idx.dimension != self.n:
                raise DomainError(f"key {idx.exponents} has wrong dimension")
            if idx.degree > self.truncation:
                raise DomainError(f"key {idx.exponents} exceeds truncation degree")

    def coefficient(self, idx: MultiIndex) -> complex:
        return self.coeffs.get(idx, 0j)

    def constant_term(self) -> complex:
        return self.coeffs.get(_zero_index(self.n), 0j)

    def sorted_items(self) -> list[tuple[MultiIndex, complex]]:
        """Canonical (graded-lexicographic) iteration order."""
        return sorted(self.coeffs.items(), key=lambda kv: kv[0])

    def degree_slice(self, k: int) -> dict[MultiIndex, complex]:
        return {idx: c for idx, c in self.coeffs.items() if idx.degree == k}

    def homogeneous_abs_sum(self, k: int, radii: tuple[float, ...]) -> float:
        """sum over |alpha| = k of |a_alpha| * r^alpha."""
        self._check_radii(radii)
        terms = [
            abs(c) * _monomial(radii, idx.exponents)
            for idx, c in sorted(self.degree_slice(k).items())
        ]
        return math.fsum(terms)

    def homogeneous_sq_sum(self, k: int, radii: tuple[float, ...]) -> float:
        """sum over |alpha| = k of |a_alpha|^2 * r^(2 alpha)."""
        self._check_radii(radii)
        terms = [
            abs(c) ** 2 * _monomial(radii, idx.exponents) ** 2
            for idx, c in sorted(self.degree_slice(k).items())
        ]
        return math.fsum(terms)

    def majorant_tail_bound(self, bold_r: float) -> float | None:
        """Upper bound on sum_{|alpha| > K} |a_alpha| r^alpha at diagonal
        radius bold_r, or None when the series carries no certificate."""
        return majorant_tail_bound(self.source, self.truncation, bold_r)

    def _check_radii(self, radii: tuple[float, ...]) -> None:
        if len(radii) != self.n:
            raise DomainError(f"radius vector has length {len(radii)}, expected {self.n}")
        if any(r < 0 for r in radii):
            raise DomainError("radii must be nonnegative")


def _monomial(radii: tuple[float, ...], exps: tuple[int, ...]) -> float:
    out = 1.0
    for r, e in zip(radii, exps):
        if e:
            out *= r**e
    return out


def majorant_tail_bound(family: FamilySpec | None, K: int, bold_r: float) -> float | None:
    """Exact geometric bound on the degree > K majorant tail at diagonal
    radius bold_r.  None for inputs without a closed-form certificate."""
    if family is None:
        return None
    if bold_r < 0 or bold_r > domain_radius_cap(family):
        raise DomainError(f"radius {bold_r} outside the closed domain of the family")
    if isinstance(family, ConstantFn):
        return 0.0
    if isinstance(family, FiniteBlaschke):
        # Coefficients of a unit-bounded disk function have modulus <= 1.
        if bold_r >= 1.0:
            raise DomainError("Blaschke tail bound needs radius < 1")
        return bold_r ** (K + 1) / (1.0 - bold_r)
    a, sigma_scale = moebius_profile(family)
    sigma = sigma_scale * bold_r
    # a**K with a = K = 0 correctly yields the full k >= 1 tail.
    return (1.0 - a * a) * a**K * sigma ** (K + 1) / (1.0 - a * sigma)


def default_truncation(
    family: FamilySpec,
    bold_r: float,
    tol: float = TAIL_TARGET,
    cap: int = MAX_TRUNCATION,
) -> int:
    """Smallest K <= cap whose certified majorant tail at bold_r is < tol."""
    for K in range(cap + 1):
        bound = majorant_tail_bound(family, K, bold_r)
        if bound is not None and bound < tol:
            return K
    return cap


# --------------------------------------------------------------------------
# Closed-form expansion
# --------------------------------------------------------------------------

def expand(
    family: FamilySpec, K: int, budget: int = DEFAULT_COEFF_BUDGET
) -> CoefficientSeries:
    """All coefficients of degree <= K from the multinomial closed form.

    For the Moebius-type families the coefficient at |alpha| = k >= 1 is
    b_k * k!/alpha! with b_k the slice coefficient; zeros are not stored.
    """
    if K < 0:
        raise DomainError("truncation degree must be >= 0")
    n = dimension(family)
    _check_budget(n, K, budget)
    coeffs: dict[MultiIndex, complex] = {}
    if isinstance(family, ConstantFn):
        if family.c != 0:
            coeffs[_zero_index(1)] = family.c
        return CoefficientSeries(1, K, coeffs, source=family)
    if isinstance(family, FiniteBlaschke):
        univariate = [complex(1.0)]
        for w in family.zeros:
            univariate = _conv1d(univariate, _blaschke_factor(w, K), K)
        for k, c in enumerate(univariate):
            if c != 0:
                coeffs[MultiIndex((k,))] = c
        return CoefficientSeries(1, K, coeffs, source=family)
    b = slice_coefficients(family, K)
    if b[0] != 0:
        coeffs[_zero_index(n)] = b[0]
    for k in range(1, K + 1):
        if b[k] == 0:
            continue
        for idx in multi_indices(n, k):
            coeffs[idx] = b[k] * idx.multinomial()
    return CoefficientSeries(n, K, coeffs, source=family)


def _blaschke_factor(w: complex, K: int) -> list[complex]:
    """(w - z)/(1 - conj(w) z) = w + (|w|^2 - 1) sum_k conj(w)^(k-1) z^k."""
    out = [w]
    lead = abs(w) ** 2 - 1.0
    for k in range(1, K + 1):
        out.append(lead * w.conjugate() ** (k - 1))
    return out


def _conv1d(p: list[complex], q: list[complex], K: int) -> list[complex]:
    out = [0j] * (K + 1)
    for i, pi in enumerate(p[: K + 1]):
        if pi == 0:
            continue
        for j, qj in enumerate(q[: K + 1 - i]):
            out[i + j] += pi * qj
    return out


def _check_budget(n: int, K: int, budget: int) -> None:
    if coefficient_count(n, K) > budget:
        raise BudgetExceededError(
            f"expansion would hold {coefficient_count(n, K)} coefficients, "
            f"budget is {budget}"
        )


# --------------------------------------------------------------------------
# Brute-force oracle: formal power-series division
# --------------------------------------------------------------------------

def oracle_expand(
    family: FamilySpec, K: int, budget: int = DEFAULT_COEFF_BUDGET
) -> CoefficientSeries:
    """Coefficients of degree <= K via N * (1/D) computed by formal division.

    Independent of the multinomial closed form in :func:`expand`; both the
    series inverse and the products run on exponent-tuple dictionaries with
    deterministic fsum accumulation.
    """
    if K < 0:
        raise DomainError("truncation degree must be >= 0")
    n = dimension(family)
    _check_budget(n, K, budget)
    numerator, denominator = _rational_form(family)
    inverse = _series_inverse(denominator, n, K)
    product = _poly_mul(numerator, inverse, K)
    coeffs = {
        MultiIndex(exps): value
        for exps, value in product.items()
        if value != 0
    }
    return CoefficientSeries(n, K, coeffs, source=family)


def _rational_form(
    family: FamilySpec,
) -> tuple[dict[tuple[int, ...], complex], dict[tuple[int, ...], complex]]:
    n = dimension(family)
    zero = (0,) * n
    if isinstance(family, ConstantFn):
        return ({zero: family.c} if family.c != 0 else {}), {zero: 1.0 + 0j}
    if isinstance(family, FiniteBlaschke):
        num: dict[tuple[int, ...], complex] = {zero: 1.0 + 0j}
        den: dict[tuple[int, ...], complex] = {zero: 1.0 + 0j}
        for w in family.zeros:
            num = _poly_mul(num, {zero: w, (1,): -1.0 + 0j}, len(family.zeros))
            den = _poly_mul(den, {zero: 1.0 + 0j, (1,): -w.conjugate()}, len(family.zeros))
        return num, den
    a = complex(family.a)
    scale = family.n if isinstance(family, ExtremalPolydiskScaled) else 1
    num = {zero: a}
    den = {zero: 1.0 + 0j}
    for i in range(n):
        unit = tuple(1 if j == i else 0 for j in range(n))
        num[unit] = -1.0 / scale
        den[unit] = -a / scale
    return num, den


def _poly_mul(
    p: dict[tuple[int, ...], complex],
    q: dict[tuple[int, ...], complex],
    K: int,
) -> dict[tuple[int, ...], complex]:
    buckets: dict[tuple[int, ...], list[complex]] = {}
    for ep, cp in p.items():
        dp = sum(ep)
        for eq, cq in q.items():
            if dp + sum(eq) > K:
                continue
            key = tuple(x + y for x, y in zip(ep, eq))
            buckets.setdefault(key, []).append(cp * cq)
    return {key: _fsum_complex(vals) for key, vals in sorted(buckets.items())}


def _series_inverse(
    d: dict[tuple[int, ...], complex], n: int, K: int
) -> dict[tuple[int, ...], complex]:
    zero = (0,) * n
    d0 = d.get(zero, 0j)
    if d0 == 0:
        raise DomainError("denominator vanishes at the origin; series inverse undefined")
    by_degree: dict[int, dict[tuple[int, ...], complex]] = {}
    for exps, c in d.items():
        by_degree.setdefault(sum(exps), {})[exps] = c
    inv: dict[tuple[int, ...], complex] = {zero: 1.0 / d0}
    inv_by_degree: dict[int, dict[tuple[int, ...], complex]] = {0: {zero: 1.0 / d0}}
    for k in range(1, K + 1):
        buckets: dict[tuple[int, ...], list[complex]] = {}
        for j, dj in by_degree.items():
            if j == 0 or j > k:
                continue
            lower = inv_by_degree.get(k - j, {})
            for ed, cd in dj.items():
                for eu, cu in lower.items():
                    key = tuple(x + y for x, y in zip(ed, eu))
                    buckets.setdefault(key, []).append(cd * cu)
        level = {
            key: -_fsum_complex(vals) / d0 for key, vals in sorted(buckets.items())
        }
        inv_by_degree[k] = level
        inv.update(level)
    return inv


def _fsum_complex(values: list[complex]) -> complex:
    return complex(
        math.fsum(v.real for v in values), math.fsum(v.imag for v in values)
    )


# --------------------------------------------------------------------------
# Distinguished-boundary boundedness check
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TorusBoundReport:
    """Result of sampling |truncated series| on the torus {|z_i| = r}."""

    sup_modulus: float
    witness: tuple[complex, ...]
    tail_bound: float | None
    certified: bool
    ok: bool


def torus_bound_check(
    series: CoefficientSeries,
    radius_cap: float,
    samples_per_axis: int = 16,
) -> TorusBoundReport:
    """Maximum of the truncated series modulus over the sampled torus
    {|z_i| = radius_cap}, plus the tail certificate when one exists.

    ``ok`` is set only on certified reports with sup + tail <= 1 + 1e-9;
    a series without a tail certificate is never silently certified.
    """
    if samples_per_axis < 8:
        raise DomainError("need at least 8 samples per axis")
    if radius_cap < 0:
        raise DomainError("radius must be nonnegative")
    if series.source is not None and radius_cap > domain_radius_cap(series.source):
        raise DomainError("radius exceeds the domain cap of the generating family")
    values, points = _torus_values(series, radius_cap, samples_per_axis)
    arg = int(np.argmax(np.abs(values)))
    sup = float(abs(values[arg]))
    tail = series.majorant_tail_bound(radius_cap)
    certified = tail is not None
    ok = certified and sup + tail <= 1.0 + TORUS_SLACK
    return TorusBoundReport(
        sup_modulus=sup,
        witness=tuple(points[arg]),
        tail_bound=tail,
        certified=certified,
        ok=ok,
    )


def _torus_values(
    series: CoefficientSeries, radius: float, m: int
) -> tuple[np.ndarray, np.ndarray]:
    n = series.n
    theta = 2.0 * np.pi * np.arange(m) / m
    axis = radius * np.exp(1j * theta)
    grids = np.meshgrid(*([axis] * n), indexing="ij")
    points = np.stack([g.ravel() for g in grids], axis=1)  # (P, n)
    items = series.sorted_items()
    if not items:
        return np.zeros(points.shape[0], dtype=complex), points
    K = series.truncation
    powers = [np.power.outer(points[:, i], np.arange(K + 1)) for i in range(n)]
    exps = np.array([idx.exponents for idx, _ in items], dtype=int)
    vals = np.array([c for _, c in items], dtype=complex)
    total = np.zeros(points.shape[0], dtype=complex)
    block = 256
    for start in range(0, len(items), block):
        stop = min(start + block, len(items))
        term = vals[start:stop, None] * powers[0][:, exps[start:stop, 0]].T
        for i in range(1, n):
            term = term * powers[i][:, exps[start:stop, i]].T
        total += term.sum(axis=0)
    return total, points
