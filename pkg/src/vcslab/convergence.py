"""Convergence verdicts for the positive norm series.

Every test operates on the structural data a TermGenerator exposes:
per-axis geometric weights plus the (constant, slope) description of
each Gamma argument.  Ratio limits are certified by evaluating the
term-ratio exactly up to moderate depths and through the Stirling
power-law form at astronomically large depths (the arguments enter only
through their logarithms), so verdicts remain decisive even when a
ratio creeps toward its limit at rates like exp(-kappa log n) with
kappa = 1e-6.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .frequencies import FrequencyConfig, RatioOverrides
from .norms import TermGenerator, term_generator
from .special import log_gamma
from .structure import ClassSpec

# a ratio counts as decisively off 1 only beyond this margin
RATIO_MARGIN = 0.05
# exact log-Gamma zone; beyond, the Stirling step s*log(A) is used
_EXACT_ARG_LIMIT = 1e6


@dataclass(frozen=True)
class Verdict:
    status: str  # "convergent" | "divergent" | "inconclusive"
    witness: str
    conditions: tuple[str, ...] = ()

    @property
    def convergent(self) -> bool:
        return self.status == "convergent"

    @property
    def divergent(self) -> bool:
        return self.status == "divergent"


class _SeriesStructure:
    """Structural view a ratio engine needs: weights and Gamma slopes."""

    def __init__(self, log_weights, factors, log_term_fn, n_axes):
        self.log_weights = tuple(log_weights)
        self.factors = tuple(factors)  # (const, slopes per axis)
        self.log_term = log_term_fn
        self.n_axes = n_axes


def structure_of(gen: TermGenerator) -> _SeriesStructure:
    n_axes = len(gen.axes)
    return _SeriesStructure(
        [gen.log_weight(k) for k in range(n_axes)],
        gen.gamma_factors(),
        gen.log_term,
        n_axes,
    )


def _replace_factors(gen: TermGenerator, kept: list[int], plain_axes: list[int]) -> _SeriesStructure:
    """Majorant with the non-kept Gamma factors stripped.

    A plain factorial n_k! is installed on each axis in plain_axes; the
    kept factors stand unchanged.  Used with Gamma(g + n) >= n!, this
    realizes the termwise majorants of the comparison arguments.
    """
    base = structure_of(gen)
    offsets = [td.log_gamma_norm for td in gen._towers]
    replaced = [i for i in range(len(base.factors)) if i not in kept]

    def log_term(n):
        lt = base.log_term(n)
        if lt == float("-inf"):
            return lt
        for i in replaced:
            c, slopes = base.factors[i]
            arg = c + sum(s * v for s, v in zip(slopes, n))
            lt += log_gamma(arg) - offsets[i]
        for k in plain_axes:
            lt -= log_gamma(n[k] + 1.0)
        return lt

    factors = [base.factors[i] for i in kept]
    factors += [
        (1.0, tuple(1.0 if j == k else 0.0 for j in range(base.n_axes)))
        for k in plain_axes
    ]
    return _SeriesStructure(base.log_weights, factors, log_term, base.n_axes)


def exponential_reference(gen: TermGenerator) -> _SeriesStructure:
    """Double-exponential majorant: same weights, one n_k! per axis."""
    return _replace_factors(gen, kept=[], plain_axes=list(range(len(gen.axes))))


def partial_plain_reference(gen: TermGenerator) -> _SeriesStructure:
    """Majorant keeping cross-driving Gamma factors, plain own-axis ones.

    Own-axis factors (the Gamma(g + n_k) of a summed tower) are replaced
    by n_k!; factors attached to a fixed tower, whose argument climbs
    along a summed axis with a ratio slope, are kept as they stand.
    """
    towers = [td.tower for td in gen._towers]
    kept = [i for i, t in enumerate(towers) if t not in gen.axes]
    plain_axes = [k for k, a in enumerate(gen.axes) if a in towers]
    return _replace_factors(gen, kept=kept, plain_axes=plain_axes)


# -- asymptotic ratio engine ------------------------------------------


def _log_arg_at(c: float, slopes, axis: int, ln_depth: float, others: dict[int, int] | None):
    """log of a Gamma argument with axis at e^ln_depth.

    others = None puts every axis at e^ln_depth (joint limit); otherwise
    the remaining axes sit at the given small integers.
    """
    pieces = []
    if c > 0.0:
        pieces.append(math.log(c))
    for j, s in enumerate(slopes):
        if s == 0.0:
            continue
        if j == axis or others is None:
            pieces.append(math.log(s) + ln_depth)
        else:
            v = others.get(j, 0)
            if v > 0:
                pieces.append(math.log(s * v))
    out = float("-inf")
    for p in pieces:
        out = p if out == float("-inf") else max(out, p) + math.log1p(math.exp(-abs(out - p)))
    return out


def _log_ratio_at(struct: _SeriesStructure, axis: int, ln_depth: float, others=None) -> float:
    lw = struct.log_weights[axis]
    if lw == float("-inf"):
        return float("-inf")
    out = lw
    for c, slopes in struct.factors:
        s = slopes[axis]
        if s == 0.0:
            continue
        log_arg = _log_arg_at(c, slopes, axis, ln_depth, others)
        if log_arg <= math.log(_EXACT_ARG_LIMIT):
            arg = math.exp(log_arg)
            out -= log_gamma(arg + s) - log_gamma(arg)
        else:
            out -= s * log_arg
    return out


_DEPTHS = [math.log(48.0), math.log(192.0), math.log(768.0)] + [
    math.log(10.0) * e for e in (6, 12, 24, 48, 96, 1000, 10_000, 100_000, 10_000_000)
]


def _decide_axis(struct: _SeriesStructure, axis: int, others=None) -> tuple[str, str]:
    """(status, witness) for the term ratio along one axis."""
    vals = [_log_ratio_at(struct, axis, L, others) for L in _DEPTHS]
    if all(v == float("-inf") for v in vals):
        return "convergent", f"axis {axis}: terms vanish (zero weight)"
    spread = max(vals) - min(vals)
    last = vals[-1]
    if spread < 1e-13:
        # no Gamma factor moves along this axis: ratio is exactly the weight
        w = math.exp(last)
        if w < 1.0:
            return "convergent", f"axis {axis}: constant ratio {w:.6g} < 1 (geometric)"
        return (
            "divergent",
            f"axis {axis}: constant ratio {w:.6g} >= 1, terms do not vanish",
        )
    tail = vals[-3:]
    decreasing = all(b <= a + 1e-12 for a, b in zip(tail, tail[1:]))
    increasing = all(b >= a - 1e-12 for a, b in zip(tail, tail[1:]))
    if last <= math.log(1.0 - RATIO_MARGIN) and decreasing:
        return "convergent", f"axis {axis}: ratio -> {math.exp(last):.6g} < 1"
    if last >= math.log(1.0 + RATIO_MARGIN) and increasing:
        return "divergent", f"axis {axis}: ratio -> {math.exp(last):.6g} > 1"
    return "inconclusive", f"axis {axis}: frontier ratio {math.exp(last):.6g}"


def row_column_check(gen: TermGenerator, probe_depth: int = 256) -> dict[int, Verdict]:
    """Per-axis ratio verdicts with the other indices held fixed."""
    struct = structure_of(gen)
    out = {}
    for k in range(struct.n_axes):
        statuses = []
        notes = []
        for v in (0, 1, 2):
            others = {j: v for j in range(struct.n_axes) if j != k}
            s, w = _decide_axis(struct, k, others)
            statuses.append(s)
            notes.append(w + f" [others={v}]")
        if all(s == "convergent" for s in statuses):
            status = "convergent"
        elif any(s == "divergent" for s in statuses):
            status = "divergent"
        else:
            status = "inconclusive"
        # numeric cross-check of the structural ratio inside the exact zone
        d = min(probe_depth, 256)
        probe = tuple(d if j == k else 2 for j in range(struct.n_axes))
        exact = struct.log_term(_step(probe, k)) - struct.log_term(probe)
        modeled = _log_ratio_at(struct, k, math.log(float(d)), {j: 2 for j in range(struct.n_axes) if j != k})
        if math.isfinite(exact) and math.isfinite(modeled) and abs(exact - modeled) > 5e-2:
            status = "inconclusive"
            notes.append(f"structural ratio mismatch exact={exact:.3g} model={modeled:.3g}")
        out[gen.axes[k]] = Verdict(status, "; ".join(notes))
    return out


def _step(n: tuple[int, ...], k: int) -> tuple[int, ...]:
    return tuple(v + (1 if j == k else 0) for j, v in enumerate(n))


def comparison_check(
    gen: TermGenerator,
    reference: _SeriesStructure | TermGenerator | None = None,
    threshold: tuple[int, ...] = (2, 2),
    probe_depth: int = 24,
) -> Verdict:
    """Termwise-domination test against a convergent majorant."""
    struct = structure_of(gen)
    if reference is None:
        ref = exponential_reference(gen)
    elif isinstance(reference, TermGenerator):
        ref = structure_of(reference)
    else:
        ref = reference
    k0 = threshold[: struct.n_axes]
    for n in itertools.product(*[range(k, k + probe_depth) for k in k0]):
        a = struct.log_term(n)
        b = ref.log_term(n)
        if a > b + 1e-12:
            return Verdict(
                "inconclusive",
                f"domination fails first at {n}: log a={a:.6g} > log b={b:.6g}",
            )
    ref_verdict = _ratio_decision(ref)
    if ref_verdict.convergent:
        return Verdict(
            "convergent",
            f"dominated beyond {tuple(k0)} by a convergent majorant ({ref_verdict.witness})",
        )
    return Verdict("inconclusive", f"majorant not certified convergent: {ref_verdict.witness}")


def _ratio_decision(struct: _SeriesStructure) -> Verdict:
    """Full ratio-test decision (rows/columns plus joint limit)."""
    per_axis = []
    for k in range(struct.n_axes):
        statuses = []
        for v in (0, 1, 2):
            others = {j: v for j in range(struct.n_axes) if j != k}
            s, _ = _decide_axis(struct, k, others)
            statuses.append(s)
        per_axis.append(statuses)
    rows_cols_ok = all(all(s == "convergent" for s in sts) for sts in per_axis)
    joint = [_decide_axis(struct, k, None) for k in range(struct.n_axes)]
    if any(s == "divergent" for s, _ in joint):
        return Verdict("divergent", "; ".join(w for s, w in joint if s == "divergent"))
    if any(all(s == "divergent" for s in sts) for sts in per_axis):
        return Verdict("divergent", "a row/column family diverges")
    if rows_cols_ok and any(s == "convergent" for s, _ in joint):
        return Verdict(
            "convergent",
            "rows/columns convergent; " + "; ".join(w for s, w in joint if s == "convergent"),
        )
    return Verdict("inconclusive", "; ".join(w for _, w in joint))


def ratio_test_double(gen: TermGenerator, probe_depth: int = 256) -> Verdict:
    return _ratio_decision(structure_of(gen))


def ratio_comparison_check(
    gen: TermGenerator,
    reference: _SeriesStructure | None = None,
    threshold: tuple[int, ...] = (2, 2),
    probe_depth: int = 24,
) -> Verdict:
    """Cross-ratio test |a(n+e)| b(n) <= |a(n)| b(n+e) against a majorant."""
    struct = structure_of(gen)
    ref = reference if reference is not None else partial_plain_reference(gen)
    k0 = threshold[: struct.n_axes]
    worst = 0.0
    for n in itertools.product(*[range(k, k + probe_depth) for k in k0]):
        for k in range(struct.n_axes):
            m = _step(n, k)
            lhs = struct.log_term(m) + ref.log_term(n)
            rhs = struct.log_term(n) + ref.log_term(m)
            if not (math.isfinite(lhs) and math.isfinite(rhs)):
                continue
            worst = max(worst, lhs - rhs)
            if lhs > rhs + 1e-12:
                return Verdict(
                    "inconclusive",
                    f"cross-ratio inequality fails first at {n} axis {gen.axes[k]}",
                )
    ref_verdict = _ratio_decision(ref)
    if ref_verdict.convergent:
        return Verdict(
            "convergent",
            f"cross-ratios bounded (worst slack {worst:.3g}) by a convergent majorant",
        )
    return Verdict("inconclusive", f"majorant not certified convergent: {ref_verdict.witness}")


def required_positive_ratios(spec: ClassSpec) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Ratio groups of which at least one must stay positive per summed axis.

    A summed index with no tower of its own enters the terms only through
    ratio-weighted slopes; if all of those ratios are sent to zero the
    series acquires constant nonvanishing terms along that index.
    """
    groups = []
    for axis in spec.summed:
        if axis in spec.tower_ids:
            continue
        feeding = set()
        for tw in spec.towers:
            for form in (tw.z_exp, tw.w_exp, tw.gamma):
                for ratio, n_of, _ in form.terms:
                    if n_of == axis and ratio is not None:
                        feeding.add(ratio)
        groups.append(tuple(sorted(feeding)))
    return tuple(groups)


def class_verdict(
    spec: ClassSpec,
    config: FrequencyConfig,
    fixed,
    z=None,
    overrides: RatioOverrides | None = None,
) -> Verdict:
    """Combined verdict: comparison, then ratio, then ratio-comparison."""
    if z is None:
        z = tuple(math.sqrt(config.omega(t)) for t in spec.tower_ids)
    gen = term_generator(spec, config, z, fixed, overrides)
    conditions = tuple(
        " or ".join(f"kappa{i}{j} > 0" for (i, j) in grp)
        for grp in required_positive_ratios(spec)
        if grp
    )

    rc = row_column_check(gen)
    for axis, v in rc.items():
        if v.divergent:
            return Verdict("divergent", f"row/column divergence: {v.witness}", conditions)

    comp = comparison_check(gen)
    if comp.convergent:
        return Verdict("convergent", f"comparison test: {comp.witness}", conditions)

    ratio = ratio_test_double(gen)
    if ratio.status != "inconclusive":
        return Verdict(ratio.status, f"ratio test: {ratio.witness}", conditions)

    rcomp = ratio_comparison_check(gen)
    if rcomp.convergent:
        return Verdict("convergent", f"ratio-comparison test: {rcomp.witness}", conditions)

    return Verdict("inconclusive", f"{comp.witness}; {ratio.witness}; {rcomp.witness}", conditions)


def gamma_ratio_surface(
    kappa: float,
    gamma13: float | None = None,
    n3: int = 0,
    kappa13: float = 1.0,
    m_range: tuple[int, int] = (50, 100),
    n_range: tuple[int, int] = (50, 100),
    step: int = 1,
):
    """Difference between the exact Gamma-argument ratio and its power law.

    Rows (m, n, kappa, difference) with

        difference = Gamma(g + kappa n + m)/Gamma(g + kappa (n+1) + m)
                     - (g + kappa (n+1) + m)^(-kappa),

    g = gamma13 (default 1 + kappa13*n3).  At kappa = 0 both terms are
    exactly 1 and the difference vanishes identically.
    """
    if kappa < 0.0:
        raise ValueError("kappa must be >= 0")
    g = (1.0 + kappa13 * n3) if gamma13 is None else float(gamma13)
    m_lo, m_hi = m_range
    n_lo, n_hi = n_range
    if m_hi < m_lo or n_hi < n_lo:
        raise ValueError("ranges must be increasing")
    if g + kappa * (n_hi + 1) + m_hi > _EXACT_ARG_LIMIT:
        raise ValueError("range exceeds the exact log-Gamma validity zone")
    rows = []
    for m in range(m_lo, m_hi + 1, step):
        for n in range(n_lo, n_hi + 1, step):
            num = g + kappa * n + m
            den = g + kappa * (n + 1) + m
            exact = math.exp(log_gamma(num) - log_gamma(den))
            asym = den ** (-kappa)
            rows.append((m, n, kappa, exact - asym))
    return rows
