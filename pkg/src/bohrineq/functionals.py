"""Majorant, area, and Bohr-type composite functionals with itemized terms.

Every improved inequality verified by this package is a statement

    head + majorant tail + w_a * A + w_q * A^2 + w_x * A <= 1

where the head is |a_0|, sup |f|, or sup |f|^2 on the distinguished boundary,
the majorant tail is sum_{|alpha| >= 1} |a_alpha| r^alpha, and A is the
degree-weighted square sum sum_k k sum_{|alpha| = k} |a_alpha|^2 r^(2 alpha).

A carries two interpretations for n >= 2.  ``literal`` evaluates the true
multi-index sum.  ``slice`` evaluates sum_k k |b_k|^2 rho^(2k) from the
univariate coefficients in s = z_1 + ... + z_n at rho = n * bold_r, which is
the identification under which the polydisk equality cases close.  The two
agree for n = 1 and differ by the multinomial deficit
sum_{|alpha|=k} (k!/alpha!)^2 < n^(2k) otherwise; both are exposed and the
deficit is measured, never hidden.

For Moebius-type families every term has an exact closed form in (a, sigma),
where sigma is the radius reached by the Moebius argument; truncated paths
carry certified geometric tail bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Union

import numpy as np

from . import constants as sharp
from . import series as ser
from .errors import DomainError, UnsupportedInterpretationError

HEAD_CONSTANT = "constant_term"
HEAD_ABS = "abs_f"
HEAD_ABS_SQ = "abs_f_squared"

INTERP_LITERAL = "literal"
INTERP_SLICE = "slice"

#: Tail target for truncated functional terms (matches the series policy).
TAIL_TARGET = ser.TAIL_TARGET

_BLASCHKE_SUP_SAMPLES = 4096


# --------------------------------------------------------------------------
# Radius specification
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RadiusSpec:
    """Evaluation polyradius; bold_r is the max coordinate."""

    coords: tuple[float, ...]

    def __post_init__(self):
        cs = tuple(float(r) for r in self.coords)
        if not cs:
            raise DomainError("radius needs at least one coordinate")
        if any(r < 0 for r in cs):
            raise DomainError("radii must be nonnegative")
        object.__setattr__(self, "coords", cs)

    @classmethod
    def diagonal(cls, n: int, r: float) -> "RadiusSpec":
        if n < 1:
            raise DomainError("dimension n must be >= 1")
        return cls((float(r),) * n)

    @classmethod
    def vector(cls, rs: tuple[float, ...]) -> "RadiusSpec":
        return cls(tuple(rs))

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def bold_r(self) -> float:
        return max(self.coords)

    @property
    def is_diagonal(self) -> bool:
        return all(r == self.coords[0] for r in self.coords)


# --------------------------------------------------------------------------
# Functional specification and presets
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FunctionalSpec:
    """Declarative description of one Bohr-type functional."""

    head: str
    include_majorant_tail: bool = True
    area_weight: float = 0.0
    area_sq_weight: float = 0.0
    extra_area_weight: float = 0.0
    area_interpretation: str = INTERP_SLICE

    def __post_init__(self):
        if self.head not in (HEAD_CONSTANT, HEAD_ABS, HEAD_ABS_SQ):
            raise DomainError(f"unknown head {self.head!r}")
        if self.area_interpretation not in (INTERP_LITERAL, INTERP_SLICE):
            raise DomainError(f"unknown interpretation {self.area_interpretation!r}")

    def uses_area(self) -> bool:
        return (
            self.area_weight != 0.0
            or self.area_sq_weight != 0.0
            or self.extra_area_weight != 0.0
        )

    def with_interpretation(self, interpretation: str) -> "FunctionalSpec":
        return replace(self, area_interpretation=interpretation)


PRESET_NAMES = (
    "classic",
    "thm_a",
    "thm_b1",
    "thm_b2",
    "thm_c",
    "thm_2_1",
    "thm_d",
    "thm_2_2",
    "thm_e",
    "thm_2_3",
)


def preset(name: str, constants: sharp.SharpConstants | None = None) -> FunctionalSpec:
    """Named functional with weights injected from the constants module."""
    c = constants if constants is not None else sharp.sharp_constants()
    table = {
        "classic": FunctionalSpec(HEAD_CONSTANT),
        "thm_a": FunctionalSpec(HEAD_CONSTANT, area_weight=16.0 / 9.0),
        "thm_b1": FunctionalSpec(HEAD_ABS),
        "thm_b2": FunctionalSpec(HEAD_ABS_SQ),
        "thm_c": FunctionalSpec(
            HEAD_CONSTANT, area_weight=16.0 / 9.0, area_sq_weight=c.lambda1
        ),
        "thm_d": FunctionalSpec(
            HEAD_ABS_SQ, area_weight=16.0 / 9.0, area_sq_weight=c.lambda2
        ),
        "thm_e": FunctionalSpec(HEAD_ABS, area_weight=c.p),
        "thm_2_3": FunctionalSpec(HEAD_ABS, extra_area_weight=c.p),
    }
    table["thm_2_1"] = table["thm_c"]
    table["thm_2_2"] = table["thm_d"]
    try:
        return table[name]
    except KeyError:
        raise DomainError(f"unknown preset {name!r}") from None


# --------------------------------------------------------------------------
# Term breakdown
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TermBreakdown:
    """Itemized functional evaluation.

    total = head_value + majorant_tail + area_weight * area_term
            + area_sq_contribution + extra_area_contribution
    margin = 1 - total.  ``certified`` means every truncated term carried a
    tail certificate; ``closed_form`` means no truncation happened at all.
    """

    head_value: float
    majorant_tail: float
    area_term: float
    area_sq_contribution: float
    extra_area_contribution: float
    total: float
    margin: float
    certified: bool
    closed_form: bool
    interpretation: str


# --------------------------------------------------------------------------
# Closed forms in (a, sigma)
# --------------------------------------------------------------------------

def schwarz_pick(a0: float, bold_r: float) -> float:
    """(a0 + r)/(1 + a0 r): boundary bound on |f| from |f(0)| = a0."""
    if not 0.0 <= a0 <= 1.0:
        raise DomainError(f"a0={a0} outside [0, 1]")
    if not 0.0 <= bold_r < 1.0:
        raise DomainError(f"bold_r={bold_r} outside [0, 1)")
    return (a0 + bold_r) / (1.0 + a0 * bold_r)


def _closed_tail(a: float, sigma: float) -> float:
    return (1.0 - a * a) * sigma / (1.0 - a * sigma)


def _closed_slice_area(a: float, sigma: float) -> float:
    one = 1.0 - a * a
    return sigma * sigma * one * one / (1.0 - a * a * sigma * sigma) ** 2


def _slice_area_tail(a: float, sigma: float, K: int) -> float:
    """Exact value of sum_{k > K} k (1-a^2)^2 a^(2k-2) sigma^(2k)."""
    y = (a * sigma) ** 2
    one = 1.0 - a * a
    return one * one * sigma * sigma * y**K * ((K + 1) - K * y) / (1.0 - y) ** 2


@lru_cache(maxsize=None)
def _sq_multinomial_sum(n: int, k: int) -> int:
    """sum over |alpha| = k in n variables of (k!/alpha!)^2, exactly."""
    if n == 1 or k == 0:
        return 1
    return sum(
        math.comb(k, j) ** 2 * _sq_multinomial_sum(n - 1, k - j) for j in range(k + 1)
    )


@lru_cache(maxsize=None)
def multinomial_sq_ratio(n: int, k: int) -> float:
    """sum_{|alpha|=k} (k!/alpha!)^2 / n^(2k): the degree-k ratio between the
    literal and slice square sums.  Equals 1 iff n = 1 or k <= 0."""
    if n == 1:
        return 1.0
    return _sq_multinomial_sum(n, k) / n ** (2 * k)


def _literal_area_diagonal(a: float, sigma: float, n: int) -> tuple[float, bool]:
    """Literal area term of a Moebius-type family at a diagonal point,
    as (certified upper value, closed_form flag)."""
    if n == 1:
        return _closed_slice_area(a, sigma), True
    one_sq = (1.0 - a * a) ** 2
    K = _area_truncation(a, sigma)
    terms = [
        k * one_sq * a ** (2 * k - 2) * sigma ** (2 * k) * multinomial_sq_ratio(n, k)
        for k in range(1, K + 1)
    ]
    return math.fsum(terms) + _slice_area_tail(a, sigma, K), False


def _area_truncation(a: float, sigma: float) -> int:
    for K in range(1, ser.MAX_TRUNCATION + 1):
        if _slice_area_tail(a, sigma, K) < TAIL_TARGET:
            return K
    return ser.MAX_TRUNCATION


# --------------------------------------------------------------------------
# Majorant
# --------------------------------------------------------------------------

def majorant(series: ser.CoefficientSeries, radius: RadiusSpec) -> float:
    """sum_{|alpha| <= K} |a_alpha| r^alpha, plus the tail certificate when
    the series carries one (making the value a certified upper bound)."""
    _check_radius_for(series.source, radius, series.n)
    partial = math.fsum(
        series.homogeneous_abs_sum(k, radius.coords) for k in range(series.truncation + 1)
    )
    tail = series.majorant_tail_bound(radius.bold_r)
    return partial + tail if tail is not None else partial


def _check_radius_for(
    family: ser.FamilySpec | None, radius: RadiusSpec, n: int
) -> None:
    if radius.n != n:
        raise DomainError(f"radius has dimension {radius.n}, expected {n}")
    if family is not None and radius.bold_r >= ser.domain_radius_cap(family):
        raise DomainError(
            f"radius {radius.bold_r} not below the domain cap "
            f"{ser.domain_radius_cap(family)}"
        )


# --------------------------------------------------------------------------
# Area term
# --------------------------------------------------------------------------

def area_term(
    target: Union[ser.FamilySpec, ser.CoefficientSeries],
    radius: RadiusSpec,
    interpretation: str = INTERP_LITERAL,
) -> float:
    """The degree-weighted square sum under the requested interpretation.

    Slice evaluation needs diagonal slice coefficients, so it accepts a
    family (or a series that remembers its generating family); a bare series
    only supports the literal interpretation.
    """
    if interpretation not in (INTERP_LITERAL, INTERP_SLICE):
        raise UnsupportedInterpretationError(f"unknown interpretation {interpretation!r}")
    if isinstance(target, ser.CoefficientSeries):
        if interpretation == INTERP_LITERAL:
            _check_radius_for(target.source, radius, target.n)
            return _literal_area_from_series(target, radius)
        if target.source is None:
            raise UnsupportedInterpretationError(
                "slice interpretation needs a generating family"
            )
        target = target.source
    family = target
    _check_radius_for(family, radius, ser.dimension(family))
    if isinstance(family, ser.ConstantFn):
        return 0.0
    if isinstance(family, ser.FiniteBlaschke):
        # n = 1: both interpretations coincide with the univariate sum.
        expanded = ser.expand(family, ser.default_truncation(family, radius.bold_r))
        return _literal_area_from_series(expanded, radius)
    a, _ = ser.moebius_profile(family)
    if interpretation == INTERP_SLICE:
        sigma = _slice_sigma(family, radius.bold_r)
        return _closed_slice_area(a, sigma)
    if radius.is_diagonal:
        sigma = _slice_sigma(family, radius.bold_r)
        value, _ = _literal_area_diagonal(a, sigma, ser.dimension(family))
        return value
    expanded = ser.expand(family, ser.default_truncation(family, radius.bold_r))
    return _literal_area_from_series(expanded, radius)


def _slice_sigma(family: ser.FamilySpec, bold_r: float) -> float:
    a, scale = ser.moebius_profile(family)
    return scale * bold_r


def _literal_area_from_series(series: ser.CoefficientSeries, radius: RadiusSpec) -> float:
    partial = math.fsum(
        k * series.homogeneous_sq_sum(k, radius.coords)
        for k in range(1, series.truncation + 1)
    )
    tail = _sq_area_tail_bound(series.source, series.truncation, radius.bold_r)
    return partial + tail if tail is not None else partial


def _sq_area_tail_bound(
    family: ser.FamilySpec | None, K: int, bold_r: float
) -> float | None:
    """Bound on sum_{k > K} k sum_{|alpha|=k} |a_alpha|^2 r^(2 alpha) via the
    slice majorant (literal degree masses never exceed the slice ones)."""
    if family is None:
        return None
    if isinstance(family, ser.ConstantFn):
        return 0.0
    if isinstance(family, ser.FiniteBlaschke):
        y = bold_r * bold_r
        return y ** (K + 1) * ((K + 1) - K * y) / (1.0 - y) ** 2
    a, _ = ser.moebius_profile(family)
    return _slice_area_tail(a, _slice_sigma(family, bold_r), K)


# --------------------------------------------------------------------------
# Composite evaluation
# --------------------------------------------------------------------------

def evaluate(
    spec: FunctionalSpec,
    family: ser.FamilySpec,
    radius: RadiusSpec,
    eval_point: tuple[complex, ...] | None = None,
) -> TermBreakdown:
    """Itemized evaluation of the functional on one family at one radius.

    Without an explicit point, |f|-type heads use the supremum of |f| over
    the distinguished boundary, which for Moebius-type families is the exact
    closed form (a + sigma)/(1 + a sigma); this is the value at which the
    sharpness computations close and the worst case the inequality must
    survive.  An explicit point evaluates |f(point)| exactly instead.
    """
    _check_radius_for(family, radius, ser.dimension(family))
    head_value, head_certified, head_closed = _head(spec, family, radius, eval_point)
    if spec.include_majorant_tail:
        tail_value, tail_closed = _majorant_tail(family, radius)
    else:
        tail_value, tail_closed = 0.0, True
    if spec.uses_area():
        area = area_term(family, radius, spec.area_interpretation)
        area_closed = _area_is_closed(family, radius, spec.area_interpretation)
    else:
        area, area_closed = 0.0, True
    area_sq = spec.area_sq_weight * area * area
    extra = spec.extra_area_weight * area
    total = head_value + tail_value + spec.area_weight * area + area_sq + extra
    return TermBreakdown(
        head_value=head_value,
        majorant_tail=tail_value,
        area_term=area,
        area_sq_contribution=area_sq,
        extra_area_contribution=extra,
        total=total,
        margin=1.0 - total,
        certified=head_certified,
        closed_form=head_closed and tail_closed and area_closed,
        interpretation=spec.area_interpretation,
    )


def _head(
    spec: FunctionalSpec,
    family: ser.FamilySpec,
    radius: RadiusSpec,
    eval_point: tuple[complex, ...] | None,
) -> tuple[float, bool, bool]:
    if spec.head == HEAD_CONSTANT:
        return abs(ser.constant_term(family)), True, True
    if eval_point is not None:
        value = abs(ser.family_value(family, eval_point))
    else:
        value, certified = _boundary_sup(family, radius)
        if spec.head == HEAD_ABS_SQ:
            value = value * value
        return value, certified, True
    if spec.head == HEAD_ABS_SQ:
        value = value * value
    return value, True, True


def _boundary_sup(family: ser.FamilySpec, radius: RadiusSpec) -> tuple[float, bool]:
    """sup of |f| over the torus of the given polyradius."""
    if isinstance(family, ser.ConstantFn):
        return abs(family.c), True
    if isinstance(family, ser.FiniteBlaschke):
        # Sampled sup: a lower estimate of the true boundary supremum.
        theta = 2.0 * np.pi * np.arange(_BLASCHKE_SUP_SAMPLES) / _BLASCHKE_SUP_SAMPLES
        z = radius.bold_r * np.exp(1j * theta)
        vals = np.ones_like(z)
        for w in family.zeros:
            vals = vals * (w - z) / (1.0 - np.conjugate(w) * z)
        return float(np.max(np.abs(vals))), False
    a, scale = ser.moebius_profile(family)
    sigma = scale * radius.bold_r
    return (a + sigma) / (1.0 + a * sigma), True


def _majorant_tail(family: ser.FamilySpec, radius: RadiusSpec) -> tuple[float, bool]:
    """sum_{|alpha| >= 1} |a_alpha| r^alpha at the enclosing diagonal radius."""
    if isinstance(family, ser.ConstantFn):
        return 0.0, True
    if isinstance(family, ser.FiniteBlaschke):
        K = ser.default_truncation(family, radius.bold_r)
        expanded = ser.expand(family, K)
        partial = math.fsum(
            expanded.homogeneous_abs_sum(k, radius.coords) for k in range(1, K + 1)
        )
        return partial + ser.majorant_tail_bound(family, K, radius.bold_r), False
    a, scale = ser.moebius_profile(family)
    return _closed_tail(a, scale * radius.bold_r), True


def _area_is_closed(
    family: ser.FamilySpec, radius: RadiusSpec, interpretation: str
) -> bool:
    if isinstance(family, ser.ConstantFn):
        return True
    if isinstance(family, ser.FiniteBlaschke):
        return False
    if interpretation == INTERP_SLICE:
        return True
    return ser.dimension(family) == 1 and radius.is_diagonal
