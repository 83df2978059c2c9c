"""Norm series: certified summation and closed-form routes.

The squared-coefficient sum of every registered class is a positive
series over one or two summed indices.  `TermGenerator` linearizes a
class at fixed frequencies/variables so terms can be evaluated on whole
index windows at once; `norm_series` sums with a geometric tail
certificate; `norm_closed_form` rebuilds the factorized closed forms
(exponential, confluent-hypergeometric via the incomplete-Gamma route,
and one-index Gamma-slope sums) where factorization holds, and reports
`None` where the sum genuinely does not factorize.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, logsumexp

from .frequencies import FrequencyConfig, RatioOverrides
from .special import hyp1f1_one_closed, log_gamma
from .structure import ClassSpec, SpecError

# closed forms the source text prints with internal inconsistencies; the
# computed form below is the one the direct series certifies
SUSPECT_PRINTED_CLOSED_FORMS = ("2d.2dof.plain-plain.A", "3d.3dof.min")


class DivergenceError(ArithmeticError):
    """Strong numerical evidence the series diverges at these parameters."""


class TailBudgetError(ArithmeticError):
    """Iteration budget exhausted before the tail certificate was met."""


@dataclass(frozen=True)
class _LinearizedForm:
    const: float
    slopes: tuple[float, ...]  # one per summed axis

    def on_grid(self, grids) -> np.ndarray:
        out = np.full(grids[0].shape, self.const)
        for s, g in zip(self.slopes, grids):
            if s != 0.0:
                out = out + s * g
        return out

    def at(self, n: tuple[int, ...]) -> float:
        return self.const + sum(s * v for s, v in zip(self.slopes, n))


@dataclass(frozen=True)
class _TowerData:
    tower: int
    log_z: float        # log |z_t|, -inf at z_t = 0
    log_w: float        # log omega_t
    z_exp: _LinearizedForm
    w_exp: _LinearizedForm
    gamma_arg: _LinearizedForm  # Gamma argument gamma_t + n_t
    log_gamma_norm: float  # log Gamma(gamma_t) subtracted for normalized towers, else 0


@dataclass(frozen=True)
class TermGenerator:
    """Positive norm-series terms of one class at fixed parameters."""

    spec: ClassSpec
    config: FrequencyConfig
    zabs: tuple[float, ...]
    fixed: tuple[int, ...]
    overrides_items: tuple = ()
    _towers: tuple[_TowerData, ...] = field(default=(), repr=False)

    @property
    def overrides(self) -> RatioOverrides:
        return dict(self.overrides_items)

    @property
    def axes(self) -> tuple[int, ...]:
        return self.spec.summed

    def log_term(self, n: tuple[int, ...]) -> float:
        """log of the series term at summed multi-index n."""
        if len(n) != len(self.axes):
            raise SpecError(f"expected {len(self.axes)} indices, got {len(n)}")
        if any(v < 0 for v in n):
            raise SpecError("summed indices must be non-negative")
        out = 0.0
        for td in self._towers:
            e = td.z_exp.at(n)
            if td.log_z == float("-inf"):
                if e > 0.0:
                    return float("-inf")
            else:
                out += 2.0 * e * td.log_z
            out -= td.w_exp.at(n) * td.log_w
            out -= log_gamma(td.gamma_arg.at(n)) - td.log_gamma_norm
        return out

    def log_term_grid(self, shape: tuple[int, ...]) -> np.ndarray:
        """log terms on the rectangular window [0, shape_i) per axis."""
        grids = np.meshgrid(*[np.arange(s, dtype=float) for s in shape], indexing="ij")
        out = np.zeros(grids[0].shape)
        for td in self._towers:
            e = td.z_exp.on_grid(grids)
            if td.log_z == float("-inf"):
                out = np.where(e > 0.0, -np.inf, out)
            else:
                out = out + 2.0 * e * td.log_z
            out = out - td.w_exp.on_grid(grids) * td.log_w
            out = out - (gammaln(td.gamma_arg.on_grid(grids)) - td.log_gamma_norm)
        return out

    def log_weight(self, axis_pos: int) -> float:
        """log of the geometric weight w of one summed axis.

        w is the term-to-term factor with all Gamma growth stripped:
        term(n + e_axis) R(n + e_axis) / (term(n) R(n)).
        """
        out = 0.0
        for td in self._towers:
            s = td.z_exp.slopes[axis_pos]
            if s != 0.0:
                if td.log_z == float("-inf"):
                    return float("-inf")
                out += 2.0 * s * td.log_z
            out -= td.w_exp.slopes[axis_pos] * td.log_w
        return out

    def gamma_factors(self) -> list[tuple[float, tuple[float, ...]]]:
        """(constant, per-axis slopes) of every Gamma argument in the term."""
        return [(td.gamma_arg.const, td.gamma_arg.slopes) for td in self._towers]

    def log_ratio(self, n: tuple[int, ...], axis_pos: int) -> float:
        stepped = tuple(v + (1 if k == axis_pos else 0) for k, v in enumerate(n))
        return self.log_term(stepped) - self.log_term(n)


def term_generator(
    spec: ClassSpec,
    config: FrequencyConfig,
    z,
    fixed,
    overrides: RatioOverrides | None = None,
) -> TermGenerator:
    """Build the norm-series term generator of a registered class."""
    zabs = tuple(abs(complex(v)) for v in z)
    if len(zabs) != spec.dof:
        raise SpecError(f"{spec.id}: expected {spec.dof} variables, got {len(zabs)}")
    if config.dimension < spec.dimension:
        raise SpecError(f"{spec.id}: needs {spec.dimension} frequencies")
    fixed = tuple(int(v) for v in fixed)
    nv0 = spec.quantum_numbers((0,) * len(spec.summed), fixed)

    def linearize(form):
        const = form.value(nv0, config, overrides)
        slopes = tuple(form.n_coefficient(axis, config, overrides) for axis in spec.summed)
        return _LinearizedForm(const, slopes)

    towers = []
    for tw, r in zip(spec.towers, zabs):
        gamma0 = tw.gamma.value(nv0, config, overrides)
        garg = _LinearizedForm(
            gamma0 + nv0[tw.tower],
            tuple(
                tw.gamma.n_coefficient(axis, config, overrides)
                + (1.0 if axis == tw.tower else 0.0)
                for axis in spec.summed
            ),
        )
        towers.append(
            _TowerData(
                tower=tw.tower,
                log_z=math.log(r) if r > 0.0 else float("-inf"),
                log_w=math.log(config.omega(tw.tower)),
                z_exp=linearize(tw.z_exp),
                w_exp=linearize(tw.w_exp),
                gamma_arg=garg,
                log_gamma_norm=log_gamma(gamma0) if tw.normalized else 0.0,
            )
        )
    items = tuple(sorted(overrides.items())) if overrides else ()
    return TermGenerator(spec, config, zabs, fixed, items, tuple(towers))


@dataclass(frozen=True)
class NormResult:
    log_norm: float
    truncation: tuple[int, ...]
    tail_bound: float  # relative to the returned value
    method: str        # "series" | "closed_form" | "factorized"
    flags: tuple[str, ...] = ()


def _certified_1d_sum(log_term_fn, rel_tol: float, budget: int = 300_000):
    """log of sum_n exp(log_term_fn(n)) with a geometric tail certificate."""
    block = 64
    start = 0
    log_partial = float("-inf")
    ratio_history: list[float] = []
    while start < budget:
        logs = np.array([log_term_fn(n) for n in range(start, start + block)])
        log_partial = float(logsumexp(np.append(logs, log_partial)))
        finite = np.isfinite(logs)
        if not finite[-8:].any():
            # weight is exactly zero along this axis beyond some index
            return log_partial, start + block, 0.0
        if finite[-4:].all():
            steps = np.exp(np.diff(logs[-4:]))
            r = float(steps.max())
            ratio_history.append(r)
            if r < 1.0:
                log_tail = logs[-1] + math.log(r) - math.log1p(-r)
                rel = math.exp(log_tail - log_partial)
                if rel <= rel_tol:
                    return log_partial, start + block, rel
            if len(ratio_history) >= 3:
                a, b, c = ratio_history[-3:]
                if a >= 1.0 - 1e-12 and b >= a - 1e-12 and c >= b - 1e-12:
                    raise DivergenceError(
                        "term ratios at/above 1 and not decreasing: divergent series"
                    )
        start += block
        block = min(2 * block, 8192)
    raise TailBudgetError("1d tail certificate not achieved within the iteration budget")


def _norm_series_1d(gen: TermGenerator, rel_tol: float) -> NormResult:
    log_norm, cutoff, rel = _certified_1d_sum(lambda n: gen.log_term((n,)), rel_tol)
    return NormResult(log_norm, (cutoff,), rel, "series")


def _frontier_ratio(logs: np.ndarray, prev: np.ndarray) -> float:
    with np.errstate(invalid="ignore"):
        r = np.exp(logs - prev)
    r = np.where(np.isfinite(r), r, 0.0)
    return float(r.max()) if r.size else 0.0


def _norm_series_2d(gen: TermGenerator, rel_tol: float) -> NormResult:
    n1, n2 = 16, 16
    cap = 4096
    ratio_history: list[float] = []
    while True:
        logs = gen.log_term_grid((n1 + 1, n2 + 1))
        log_partial = float(logsumexp(logs))
        if not math.isfinite(log_partial):
            raise DivergenceError("window sum is not finite")
        log_row_mass = float(logsumexp(logs[n1, :]))
        log_col_mass = float(logsumexp(logs[:, n2]))
        r1 = _frontier_ratio(logs[n1, :], logs[n1 - 1, :])
        r2 = _frontier_ratio(logs[:, n2], logs[:, n2 - 1])
        if r1 < 1.0 and r2 < 1.0:
            pieces = []
            if math.isfinite(log_row_mass):
                pieces.append(log_row_mass + math.log(r1) - math.log1p(-r1))
            if math.isfinite(log_col_mass):
                pieces.append(log_col_mass + math.log(r2) - math.log1p(-r2))
            if math.isfinite(logs[n1, n2]) and r1 > 0.0 and r2 > 0.0:
                pieces.append(
                    logs[n1, n2]
                    + math.log(r1) - math.log1p(-r1)
                    + math.log(r2) - math.log1p(-r2)
                )
            log_tail = float(logsumexp(pieces)) if pieces else float("-inf")
            rel = math.exp(log_tail - log_partial) if math.isfinite(log_tail) else 0.0
            if rel <= rel_tol:
                return NormResult(log_partial, (n1, n2), rel, "series")
        ratio_history.append(max(r1, r2))
        if len(ratio_history) >= 3:
            a, b, c = ratio_history[-3:]
            if a >= 1.0 - 1e-12 and b >= a - 1e-12 and c >= b - 1e-12:
                raise DivergenceError(
                    "frontier ratios at/above 1 and not decreasing: divergent series"
                )
        if n1 == cap and n2 == cap:
            raise TailBudgetError("2d tail certificate not achieved within the window cap")
        if log_row_mass >= log_col_mass:
            n1 = min(2 * n1, cap)
        else:
            n2 = min(2 * n2, cap)


def norm_series(gen: TermGenerator, rel_tol: float = 1e-12) -> NormResult:
    """Certified evaluation of the squared-coefficient sum."""
    if len(gen.axes) == 1:
        return _norm_series_1d(gen, rel_tol)
    if len(gen.axes) == 2:
        return _norm_series_2d(gen, rel_tol)
    raise SpecError("norm_series supports one or two summed indices")


def _axis_factor_analysis(gen: TermGenerator):
    """Map each summed axis to the index of the Gamma factor it drives.

    Returns None when some Gamma argument couples two summed axes, or
    two Gamma factors climb along the same axis: those sums do not
    factorize and have no cataloged closed form.
    """
    per_axis: list[list[int]] = [[] for _ in gen.axes]
    for t_idx, (_, slopes) in enumerate(gen.gamma_factors()):
        hit = [k for k, s in enumerate(slopes) if s != 0.0]
        if len(hit) > 1:
            return None
        if hit:
            per_axis[hit[0]].append(t_idx)
    if any(len(lst) > 1 for lst in per_axis):
        return None
    return [lst[0] if lst else None for lst in per_axis]


def norm_closed_form(
    spec: ClassSpec,
    config: FrequencyConfig,
    z,
    fixed,
    overrides: RatioOverrides | None = None,
    rel_tol: float = 1e-12,
) -> NormResult | None:
    """Factorized/closed evaluation of the norm; None when unavailable.

    Never sums the double series: per-axis factors are the exponential,
    the 1F1(1;b;x) incomplete-Gamma closed form, or (for Gamma arguments
    climbing with a fractional ratio slope) a certified one-index sum.
    """
    gen = term_generator(spec, config, z, fixed, overrides)
    assignment = _axis_factor_analysis(gen)
    if assignment is None:
        return None
    factors = gen.gamma_factors()
    log_norm = gen.log_term((0,) * len(gen.axes))  # window-origin term
    method = "closed_form"
    tail = 0.0
    trunc = []
    for k, t_idx in enumerate(assignment):
        lw = gen.log_weight(k)
        if lw == float("-inf"):
            trunc.append(0)
            continue
        x = math.exp(lw)
        if t_idx is None:
            # no Gamma growth along this axis: plain geometric series
            if x >= 1.0:
                return None
            log_norm += -math.log1p(-x)
            trunc.append(0)
            continue
        const, slopes = factors[t_idx]
        slope = slopes[k]
        own = gen._towers[t_idx].tower == gen.axes[k]
        if own and slope == 1.0:
            # sum_n x^n Gamma(b)/Gamma(b+n) = 1F1(1;b;x); the n = 0 term
            # is already inside the origin term
            log_norm += x if const == 1.0 else hyp1f1_one_closed(const, x).log_abs
            trunc.append(0)
        else:
            # Gamma argument climbs with ratio slope: certified 1d sum of
            # x^n Gamma(c)/Gamma(c + slope n)
            log_s, cut, rel = _certified_1d_sum(
                lambda n: n * lw - (log_gamma(const + slope * n) - log_gamma(const)),
                rel_tol,
            )
            log_norm += log_s
            tail = max(tail, rel)
            method = "factorized"
            trunc.append(cut)
    flags = ("printed-closed-form-suspected-typo",) if spec.id in SUSPECT_PRINTED_CLOSED_FORMS else ()
    return NormResult(log_norm, tuple(trunc), tail, method, flags)


@dataclass(frozen=True)
class TruncatedState:
    """Normalized coefficient table on a truncation window."""

    spec: ClassSpec
    z: tuple[complex, ...]
    fixed: tuple[int, ...]
    nmax: tuple[int, ...]
    coeffs: dict
    log_norm: float
    tail_bound: float

    def total_weight(self) -> float:
        return sum(abs(c) ** 2 for c in self.coeffs.values())

    def coefficient(self, n) -> complex:
        return self.coeffs.get(tuple(n), 0.0)


def state(
    spec: ClassSpec,
    config: FrequencyConfig,
    z,
    fixed,
    nmax,
    overrides: RatioOverrides | None = None,
) -> TruncatedState:
    """Normalized truncated state; raises DivergenceError off the solvable domain."""
    z = tuple(complex(v) for v in z)
    fixed = tuple(int(v) for v in fixed)
    if isinstance(nmax, int):
        nmax = (nmax,) * len(spec.summed)
    gen = term_generator(spec, config, z, fixed, overrides)
    norm = norm_series(gen, rel_tol=1e-12)
    if not math.isfinite(norm.log_norm):
        raise SpecError(
            f"{spec.id}: state vanishes identically (fixed-index powers of a zero variable)"
        )
    z_args = tuple(cmath.phase(v) for v in z)
    coeffs = {}
    for n in itertools.product(*[range(m + 1) for m in nmax]):
        lt = gen.log_term(n)
        if lt == float("-inf"):
            coeffs[n] = 0.0
            continue
        nvals = spec.quantum_numbers(n, fixed)
        phase = spec.coeff_phase(nvals, z_args, config, overrides)
        coeffs[n] = cmath.exp(0.5 * (lt - norm.log_norm) + 1j * phase)
    return TruncatedState(spec, z, fixed, tuple(nmax), coeffs, norm.log_norm, norm.tail_bound)

