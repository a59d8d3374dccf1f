"""Evaluation of the partial theta series and its triple-product factorization.

The central object is theta(q, z) = sum_{j>=0} q^{j(j+1)/2} z^j, entire in z
for 0 < |q| < 1.  Alongside it this module evaluates

* theta_dagger(q, z) = sum_{j>=0} q^{j(j-1)/2} z^j      (= theta(q, z/q)),
* G(q, z)            = sum_{j>=1} q^{j(j-1)/2} z^{-j},
* the two-sided series theta_star = theta + G, and its product form
  theta_star = Q * U * R with
      Q = prod_{j>=1} (1 - q^j),
      U = prod_{j>=1} (1 + z q^j),
      R = prod_{j>=1} (1 + q^{j-1} / z),
* the z-derivative of theta (for Newton refinement of zeros).

Every evaluation returns an `EvalResult` whose `tail_bound` is a proven
majorant of the dropped tail: for the series, term-modulus ratios are
eventually geometric, and for the products the dropped log-factors are
bounded by a geometric sum.  All functions are pure and thread-safe.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import BudgetExceeded, DomainError, ZeroArgument

# Radius below which strong modulus-separation of the zeros of theta(q, .) is
# already established; quoted as an input, not recomputed.
C0 = 0.2078750206


def require_finite(z, name="value"):
    """Coerce to complex and reject non-finite components."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{name} must have finite real and imaginary parts, got {z!r}")
    return z


@dataclass(frozen=True)
class SeriesBudget:
    """Truncation budget: target bound on the dropped tail plus a hard term cap."""

    tolerance: float = 1e-12
    max_terms: int = 10_000

    def __post_init__(self):
        if not (isinstance(self.tolerance, (int, float)) and self.tolerance > 0
                and math.isfinite(self.tolerance)):
            raise DomainError(f"tolerance must be positive and finite, got {self.tolerance!r}")
        if not (isinstance(self.max_terms, int) and self.max_terms >= 2):
            raise DomainError(f"max_terms must be an integer >= 2, got {self.max_terms!r}")


DEFAULT_BUDGET = SeriesBudget()


@dataclass(frozen=True)
class QParameter:
    """Base point q with 0 < |q| < 1, cached polar form, and region predicates."""

    value: complex
    modulus: float = field(init=False)
    argument: float = field(init=False)

    def __post_init__(self):
        v = require_finite(self.value, "q")
        m = abs(v)
        if not 0.0 < m < 1.0:
            raise DomainError(f"|q| must lie in (0, 1), got |q| = {m!r}")
        object.__setattr__(self, "value", v)
        object.__setattr__(self, "modulus", m)
        object.__setattr__(self, "argument", cmath.phase(v))

    @classmethod
    def from_polar(cls, modulus, argument):
        return cls(cmath.rect(modulus, argument))

    def conjugate(self):
        return QParameter(self.value.conjugate())

    def in_left_half_disk(self, radius):
        """Membership in {0 < |q| <= radius, arg(q) in [pi/2, 3pi/2]}.

        The boundary rays arg = +-pi/2 are included; a relative slack absorbs
        the rounding of cmath.rect(r, pi/2).
        """
        return self.modulus <= radius + 1e-15 and self.value.real <= 1e-12 * self.modulus

    def in_punctured_disk(self, radius):
        return self.modulus <= radius + 1e-15


def as_q(q):
    """Accept either a QParameter or a raw complex-like value."""
    return q if isinstance(q, QParameter) else QParameter(q)


@dataclass(frozen=True)
class EvalResult:
    """A computed value together with a certified truncation bound.

    `scale` is the sum of the included term moduli (plus the tail bound): the
    conditioning scale of the evaluation.  |value| is meaningless below
    roughly `scale` times machine epsilon, so residual-style quantities
    should be measured relative to `scale`.
    """

    value: complex
    tail_bound: float
    terms_used: int
    scale: float


def _series_eval(first, steps, budget, what):
    """Sum first * (1 + s1 + s1 s2 + ...) where `steps` yields s1, s2, ...

    The step moduli must be nonincreasing, so once |s_{j+1}| = r < 1/2 the
    dropped tail is below |t_j| * r / (1 - r).  Uses Kahan-compensated
    complex accumulation.
    """
    total = first
    comp = 0j
    term = first
    scale = abs(first)
    used = 1
    pending = next(steps)
    while True:
        r = abs(pending)
        if r < 0.5:
            tail = abs(term) * r / (1.0 - r)
            if tail <= budget.tolerance:
                return EvalResult(total, tail, used, scale + tail)
        if used >= budget.max_terms:
            raise BudgetExceeded(
                f"{what}: tail not below {budget.tolerance:g} within {budget.max_terms} terms")
        term *= pending
        pending = next(steps)
        used += 1
        scale += abs(term)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t


def _theta_steps(q, z):
    # t_j / t_{j-1} = q^j z
    p = 1.0 + 0j
    while True:
        p *= q
        yield p * z


def _theta_dagger_steps(q, z):
    # t_j / t_{j-1} = q^{j-1} z
    yield complex(z)
    p = 1.0 + 0j
    while True:
        p *= q
        yield p * z


def _g_steps(q, z):
    # g_{m+1} / g_m = q^m / z
    p = 1.0 + 0j
    while True:
        p *= q
        yield p / z


def _theta_dz_steps(q, z):
    # d_j / d_{j-1} = (j / (j-1)) q^j z
    p = complex(q)
    j = 1
    while True:
        j += 1
        p *= q
        yield p * z * (j / (j - 1))


def eval_theta(q, z, budget=DEFAULT_BUDGET):
    """sum_{j>=0} q^{j(j+1)/2} z^j with a certified geometric tail bound."""
    q = as_q(q)
    z = require_finite(z, "z")
    return _series_eval(1.0 + 0j, _theta_steps(q.value, z), budget, "theta")


def eval_theta_dagger(q, z, budget=DEFAULT_BUDGET):
    """sum_{j>=0} q^{j(j-1)/2} z^j = 1 + z + q z^2 + q^3 z^3 + ...

    Evaluated by its own series rather than as theta(q, z/q), which avoids
    cancellation near |z| = |q|^{-1/2}.
    """
    q = as_q(q)
    z = require_finite(z, "z")
    return _series_eval(1.0 + 0j, _theta_dagger_steps(q.value, z), budget, "theta_dagger")


def eval_G(q, z, budget=DEFAULT_BUDGET):
    """sum_{j>=1} q^{j(j-1)/2} z^{-j}; the principal part of the two-sided series.

    Term-modulus ratio is |q|^m / |z|, eventually geometric for any z != 0.
    """
    q = as_q(q)
    z = require_finite(z, "z")
    if z == 0:
        raise ZeroArgument("G(q, z) requires z != 0")
    return _series_eval(1.0 / z, _g_steps(q.value, z), budget, "G")


def eval_theta_dz(q, z, budget=DEFAULT_BUDGET):
    """d/dz of the partial theta series: sum_{j>=1} j q^{j(j+1)/2} z^{j-1}."""
    q = as_q(q)
    z = require_finite(z, "z")
    return _series_eval(complex(q.value), _theta_dz_steps(q.value, z), budget, "theta_dz")


def _product_eval(first_dev, ratio, budget, what):
    """prod_j (1 + d_j) with d_{j+1} = d_j * ratio and |ratio| < 1.

    After the factor with deviation modulus m, the dropped factors satisfy
    sum |d_i| <= m |ratio| / (1 - |ratio|) =: S and the value error is below
    |partial| * (e^S - 1).  Stops once the current deviation is under
    tolerance/10 and that bound is under tolerance.
    """
    prod = 1.0 + 0j
    dev = complex(first_dev)
    rho = abs(ratio)
    used = 0
    scale = 0.0
    while True:
        prod *= 1.0 + dev
        used += 1
        m = abs(dev)
        scale += m
        if prod == 0:
            # an exact zero factor annihilates the full product
            return EvalResult(prod, 0.0, used, scale)
        tail_sum = m * rho / (1.0 - rho)
        bound = abs(prod) * math.expm1(tail_sum)
        if m < budget.tolerance / 10.0 and bound <= budget.tolerance:
            return EvalResult(prod, bound, used, scale + tail_sum)
        if used >= budget.max_terms:
            raise BudgetExceeded(
                f"{what}: product tail not below {budget.tolerance:g} "
                f"within {budget.max_terms} factors")
        dev *= ratio


def eval_Q(q, budget=DEFAULT_BUDGET):
    """prod_{j>=1} (1 - q^j)."""
    q = as_q(q)
    return _product_eval(-q.value, q.value, budget, "Q")


def eval_U(q, z, budget=DEFAULT_BUDGET):
    """prod_{j>=1} (1 + z q^j)."""
    q = as_q(q)
    z = require_finite(z, "z")
    return _product_eval(z * q.value, q.value, budget, "U")


def eval_R(q, z, budget=DEFAULT_BUDGET):
    """prod_{j>=1} (1 + q^{j-1} / z)."""
    q = as_q(q)
    z = require_finite(z, "z")
    if z == 0:
        raise ZeroArgument("R(q, z) requires z != 0")
    return _product_eval(1.0 / z, q.value, budget, "R")


def _triple_product(q, z, budget):
    """Q*U*R with an error bound propagated through the three factors.

    Factor tolerances must be scaled by the sizes of the other two factors
    (|U| can be enormous), so a cheap probing pass estimates magnitudes
    first and a second pass retries with tightened budgets if needed.
    """
    probe = SeriesBudget(tolerance=1e-3, max_terms=budget.max_terms)
    mags = [max(abs(r.value), 1e-6) for r in
            (eval_Q(q, probe), eval_U(q, z, probe), eval_R(q, z, probe))]
    mq, mu, mr = mags
    tol_q = budget.tolerance / (4.0 * mu * mr)
    tol_u = budget.tolerance / (4.0 * mq * mr)
    tol_r = budget.tolerance / (4.0 * mq * mu)
    for _ in range(2):
        rq = eval_Q(q, SeriesBudget(tol_q, budget.max_terms))
        ru = eval_U(q, z, SeriesBudget(tol_u, budget.max_terms))
        rr = eval_R(q, z, SeriesBudget(tol_r, budget.max_terms))
        value = rq.value * ru.value * rr.value
        aq, au, ar = abs(rq.value), abs(ru.value), abs(rr.value)
        bound = (aq * au * rr.tail_bound
                 + aq * (ar + rr.tail_bound) * ru.tail_bound
                 + (au + ru.tail_bound) * (ar + rr.tail_bound) * rq.tail_bound)
        if bound <= budget.tolerance:
            terms = rq.terms_used + ru.terms_used + rr.terms_used
            return EvalResult(value, bound, terms, rq.scale + ru.scale + rr.scale)
        shrink = budget.tolerance / (2.0 * bound)
        tol_q *= shrink
        tol_u *= shrink
        tol_r *= shrink
    raise BudgetExceeded("theta_star product: propagated bound above tolerance after retry")


def eval_theta_star(q, z, budget=DEFAULT_BUDGET, method="series"):
    """Two-sided series sum_{j in Z} q^{j(j+1)/2} z^j.

    method="series" sums the nonnegative part (= theta) and the principal
    part (= G); method="product" evaluates Q*U*R.  Both carry certified
    bounds and agree within their combined bounds.
    """
    q = as_q(q)
    z = require_finite(z, "z")
    if z == 0:
        raise ZeroArgument("theta_star(q, z) requires z != 0")
    if method == "series":
        half = SeriesBudget(budget.tolerance / 2.0, budget.max_terms)
        a = eval_theta(q, z, half)
        b = eval_G(q, z, half)
        return EvalResult(a.value + b.value, a.tail_bound + b.tail_bound,
                          a.terms_used + b.terms_used, a.scale + b.scale)
    if method == "product":
        return _triple_product(q, z, budget)
    raise DomainError(f"method must be 'series' or 'product', got {method!r}")
