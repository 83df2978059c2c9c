"""Measure densities and the generalized moment problems they solve.

Each class's resolution of identity reduces, after phase integration,
to the diagonal moment conditions

    int chi(u) prod_t u_t^(e_t(n)) / omega_t^(w_t(n)) du  =  prod_t R_t(n),

with e/w the variable/frequency exponents and R the factorial targets.
`density_for` returns the cataloged density of a registered class;
`solve_generalized` constructs the same densities from the generic
recipe (ratio staging, optional index recombination, triangular change
of variables, Jacobian absorption) for arbitrary exponent tuples; and
`verify_moments` certifies the identity by dual-route quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .frequencies import FrequencyConfig
from .logspace import LogValue
from .quadrature import QuadSpec, combine_routes, log_moment_piece
from .report import VerificationReport, make_report
from .special import log_gamma
from .structure import ClassSpec, SpecError


@dataclass(frozen=True)
class ExpTerm:
    """One exponential factor exp(-(u_var^self_exp * prod u_j^B_j)/S)."""

    var: int
    log_scale: float
    self_exp: float = 1.0
    couplings: tuple[tuple[int, float], ...] = ()


@dataclass(frozen=True)
class MeasureDensity:
    """chi(u) = exp(log_const) * prod u_t^powers[t] * prod exp-terms."""

    spec_id: str
    variables: tuple[int, ...]
    log_const: float
    powers: tuple[tuple[int, float], ...]
    exp_terms: tuple[ExpTerm, ...]
    note: str = ""

    def power(self, var: int) -> float:
        return sum(p for v, p in self.powers if v == var)

    def log_value(self, u: dict[int, float]) -> float:
        """Pointwise log chi(u); -inf where a positive power hits u = 0."""
        out = self.log_const
        for v, p in self.powers:
            if p == 0.0:
                continue
            if u[v] == 0.0:
                return float("-inf") if p > 0.0 else float("inf")
            out += p * math.log(u[v])
        for term in self.exp_terms:
            mono = u[term.var] ** term.self_exp
            for j, b in term.couplings:
                mono *= u[j] ** b
            out -= mono * math.exp(-term.log_scale)
        return out

    def perturbed(self, var: int, scale_factor: float) -> "MeasureDensity":
        """Negative control: rescale one exponential factor's scale only."""
        terms = tuple(
            replace(t, log_scale=t.log_scale + math.log(scale_factor)) if t.var == var else t
            for t in self.exp_terms
        )
        return replace(self, exp_terms=terms, note=self.note + f" perturbed(var={var})")


def _shifted_plain_factor(var: int, omega: float, alpha: float):
    """Density factor of a plain tower: u^alpha e^(-u/w) / (Gamma(1+alpha) w^(1+alpha))."""
    log_const = -(1.0 + alpha) * math.log(omega) - log_gamma(1.0 + alpha)
    powers = ((var, alpha),) if alpha else ()
    return log_const, powers, ExpTerm(var, math.log(omega))


def _smart_factor(var: int, omega: float):
    """Density factor of a matched-exponent Gamma tower: f(r, w)."""
    return -math.log(omega), (), ExpTerm(var, math.log(omega))


def _product_density(spec: ClassSpec, config: FrequencyConfig) -> MeasureDensity:
    log_const = 0.0
    powers: list[tuple[int, float]] = []
    terms: list[ExpTerm] = []
    for tw in spec.towers:
        w = config.omega(tw.tower)
        if tw.normalized:
            c, p, t = _shifted_plain_factor(tw.tower, w, config.shift(tw.tower))
        else:
            c, p, t = _smart_factor(tw.tower, w)
        log_const += c
        powers.extend(p)
        terms.append(t)
    return MeasureDensity(spec.id, spec.tower_ids, log_const, tuple(powers), tuple(terms))


def _require_unshifted(spec: ClassSpec, config: FrequencyConfig):
    if any(config.shift(t) != 0.0 for t in spec.tower_ids):
        raise SpecError(
            f"{spec.id}: exponent-variant sub-classes are cataloged at zero spectrum shift"
        )


def _one_dof_density(spec: ClassSpec, config: FrequencyConfig, fixed) -> MeasureDensity:
    s = spec.summed[0]
    f = spec.fixed[0]
    nf = fixed[0]
    w = config.omega(s)
    k = config.ratio(s, f)
    b, bp, _, _ = spec.quadruple
    gamma_family = not spec.towers[0].normalized
    if spec.subclass == "A" and not gamma_family:
        c, p, t = _shifted_plain_factor(s, w, config.shift(s))
        return MeasureDensity(spec.id, (s,), c, p, (t,))
    if gamma_family and (b, bp) == (1, 1):
        c, p, t = _smart_factor(s, w)
        return MeasureDensity(spec.id, (s,), c, p, (t,))
    _require_unshifted(spec, config)
    if gamma_family:
        # variants of the deformed tower: rho(r, n_f) = [r^2]^((1-b) k n_f) w^(-(1-bp) k n_f) f(r, w)
        power = (1.0 - b) * k * nf
        log_const = -(1.0 - bp) * k * nf * math.log(w) - math.log(w)
    else:
        # variants of the plain tower: rho(r, n_f) = r^(-2 b k n_f) w^(bp k n_f) f(r, w)
        power = -b * k * nf
        log_const = bp * k * nf * math.log(w) - math.log(w)
    return MeasureDensity(
        spec.id, (s,), log_const, ((s, power),) if power else (), (ExpTerm(s, math.log(w)),)
    )


def _two_dof_density(spec: ClassSpec, config: FrequencyConfig, fixed) -> MeasureDensity:
    n2 = fixed[0]
    w1, w2 = config.omega(1), config.omega(2)
    k2 = config.ratio(2, 1)  # omega_1 / omega_2
    letter = spec.subclass
    if letter == "A":
        return _product_density(spec, config)
    _require_unshifted(spec, config)
    lw1, lw2 = math.log(w1), math.log(w2)
    log_const = -lw2  # the second-variable factor f(r2, w2) in every entry
    powers: list[tuple[int, float]] = []
    # per-table entries: (log S1, second-variable power, couplings, extra const)
    if spec.family == "plain-plain":
        entry = {
            "B": (lw1 + k2 * lw2, 0.0, (), 0.0),
            "C": (lw1, k2, ((2, k2),), 0.0),
            "D": (lw1 + k2 * lw2, k2, ((2, k2),), 0.0),
        }[letter]
    elif spec.family == "gamma1-plain":
        entry = {
            "B": (lw1 + k2 * lw2, 0.0, (), -n2 * lw2),
            "C": (lw1, k2 + n2, ((2, k2),), 0.0),
            "D": (lw1 + k2 * lw2, k2 + n2, ((2, k2),), -n2 * lw2),
        }[letter]
    elif spec.family == "plain-gamma2":
        entry = {
            "B": (lw1, -k2, ((2, -k2),), 0.0),
            "C": (lw1 - k2 * lw2, 0.0, (), 0.0),
            "D": (lw1 - k2 * lw2, -k2, ((2, -k2),), 0.0),
        }[letter]
    elif spec.family == "gamma1-gamma2":
        entry = {
            "B": (lw1, -(k2 + n2), ((2, -k2),), 0.0),
            "C": (lw1 - k2 * lw2, 0.0, (), n2 * lw2),
            "D": (lw1 - k2 * lw2, -(k2 + n2), ((2, -k2),), n2 * lw2),
        }[letter]
    else:
        raise SpecError(f"{spec.id}: not a cataloged two-variable family")
    log_s1, p2, couplings, extra_const = entry
    log_const += extra_const - log_s1
    if p2:
        powers.append((2, p2))
    terms = (ExpTerm(1, log_s1, couplings=tuple(couplings)), ExpTerm(2, lw2))
    return MeasureDensity(spec.id, (1, 2), log_const, tuple(powers), terms)


def density_for(spec: ClassSpec, config: FrequencyConfig, fixed) -> MeasureDensity:
    """Cataloged density of a registered class at the given fixed indices."""
    fixed = tuple(int(v) for v in fixed)
    if len(fixed) != len(spec.fixed):
        raise SpecError(f"{spec.id}: expected {len(spec.fixed)} fixed indices")
    if spec.dimension == 3:
        return _product_density(spec, config)
    if spec.dof == 1:
        return _one_dof_density(spec, config, fixed)
    return _two_dof_density(spec, config, fixed)


# -- generalized recipe ------------------------------------------------

TARGET_FORMS = ("PlainPlain", "GammaPlain", "PlainGamma", "GammaGamma")


def solve_generalized(
    target_form: str,
    tuple8,
    config: FrequencyConfig,
    fixed_value: int,
) -> MeasureDensity:
    """Density from the generic recipe for the two-variable problems.

    tuple8 = (a1, b1, a1p, b1p, a2, b2, a2p, b2p): variable exponents
    a_i n_i + b_i k_i n_other and frequency exponents with primes.  The
    construction: stage every variable as a ratio u/omega, recombine or
    simplify the cross factors as the target form dictates, make the
    triangular change of variables (invertible whenever a_i != 0), and
    absorb the Jacobians into the per-variable factors.
    """
    if target_form not in TARGET_FORMS:
        raise SpecError(f"unknown target form {target_form!r}")
    a1, b1, a1p, b1p, a2, b2, a2p, b2p = (float(v) for v in tuple8)
    if a1 == 0.0 or a1p == 0.0 or a2 == 0.0 or a2p == 0.0:
        raise SpecError("zero leading exponents make the change of variables singular")
    n2 = int(fixed_value)
    w1, w2 = config.omega(1), config.omega(2)
    k1, k2 = config.ratio(1, 2), config.ratio(2, 1)
    lw1, lw2 = math.log(w1), math.log(w2)
    r1_gamma = target_form in ("GammaPlain", "GammaGamma")
    r2_gamma = target_form in ("PlainGamma", "GammaGamma")

    # second-variable factor: a2 u2^(a2-1) e^(-u2^a2 / w2^a2p) / w2^a2p
    log_const = math.log(a2) - a2p * lw2
    powers: list[tuple[int, float]] = [(2, a2 - 1.0)]
    term2 = ExpTerm(2, a2p * lw2, self_exp=a2)

    # first-variable factor per target form
    if not r2_gamma:
        # recombine u2^(b2 k2 n1) into the first variable
        cross = b2 * k2
        log_s1 = a1p * lw1 + b2p * k2 * lw2
        if r1_gamma:
            # keep the u1 fixed-index dependence matched to the Gamma
            # argument; the bracket collects the leftover factors
            p1_extra = (a1 - b1) * k1 * n2
            powers.append((2, b2 * n2))
            log_const += (b1p - a1p) * k1 * n2 * lw1 - b2p * n2 * lw2
        else:
            # simplify u1^(b1 k1 n2) against the density
            p1_extra = -b1 * k1 * n2
            log_const += b1p * k1 * n2 * lw1
    else:
        # the Gamma target in the second tower forbids recombining u2
        cross = (b2 - a2) * k2
        log_s1 = a1p * lw1 + (b2p - a2p) * k2 * lw2
        if r1_gamma:
            p1_extra = (a1 - b1) * k1 * n2
            log_const += (b1p - a1p) * k1 * n2 * lw1
            # k2*k1 = 1 exactly: the reciprocal-ratio bracket exponents
            # collapse to bare multiples of the fixed index
            powers.append((2, (b2 - a2) * n2))
            log_const += (a2p - b2p) * n2 * lw2
        else:
            p1_extra = -b1 * k1 * n2
            log_const += b1p * k1 * n2 * lw1
    log_const += math.log(a1) - log_s1
    powers.append((1, a1 - 1.0 + p1_extra))
    powers.append((2, cross))
    term1 = ExpTerm(1, log_s1, self_exp=a1, couplings=((2, cross),) if cross else ())
    powers = [(v, p) for v, p in powers if p != 0.0]
    return MeasureDensity(
        f"generalized.{target_form}", (1, 2), log_const, tuple(powers), (term1, term2)
    )


# -- moment integration ------------------------------------------------


def _integration_order(density: MeasureDensity) -> list[ExpTerm]:
    coupled = [t for t in density.exp_terms if t.couplings]
    plainer = [t for t in density.exp_terms if not t.couplings]
    for t in coupled:
        for j, _ in t.couplings:
            if j in [c.var for c in coupled]:
                raise SpecError("cyclic variable couplings are out of scope")
    return coupled + plainer


def _integrate(
    density: MeasureDensity,
    u_exponents: dict[int, float],
    quad: QuadSpec,
) -> tuple[float, float]:
    """(log integral, route disagreement) of int chi(u) prod u^e du."""
    q = {v: u_exponents.get(v, 0.0) + density.power(v) for v in density.variables}
    log_a = log_b = density.log_const
    for term in _integration_order(density):
        qv = q[term.var]
        a = term.self_exp
        s = (qv + 1.0) / a
        for j, bexp in term.couplings:
            q[j] -= bexp * s
        pa, pb = log_moment_piece(s - 1.0, 0.0, quad)
        log_piece = s * term.log_scale - math.log(a)
        log_a += pa + log_piece
        log_b += pb + log_piece
    return combine_routes(log_a, log_b, quad, context=f"({density.spec_id})")


def moment_target(spec: ClassSpec, config: FrequencyConfig, fixed, n) -> LogValue:
    """Product of the factorial targets R_t(n)."""
    nvals = spec.quantum_numbers(n, fixed)
    return LogValue.exp(spec.log_radial_product(nvals, config))


def moment_integral(
    spec: ClassSpec,
    config: FrequencyConfig,
    fixed,
    n,
    density: MeasureDensity | None = None,
    quad: QuadSpec = QuadSpec(),
) -> LogValue:
    """The radial moment integral at summed multi-index n."""
    density = density_for(spec, config, fixed) if density is None else density
    nvals = spec.quantum_numbers(n, fixed)
    e = {tw.tower: tw.z_exp.value(nvals, config) for tw in spec.towers}
    log_i, _ = _integrate(density, e, quad)
    for tw in spec.towers:
        log_i -= tw.w_exp.value(nvals, config) * math.log(config.omega(tw.tower))
    return LogValue.exp(log_i)


def probe_lattice(n_axes: int, n_max: int) -> list[tuple[int, ...]]:
    if n_axes == 1:
        return [(n,) for n in range(n_max + 1)]
    pts = set()
    for n in range(n_max + 1):
        pts.update({(n, 0), (0, n), (n, n)})
    for p in [(1, 2), (2, 1), (1, 3), (3, 1), (2, 5), (5, 2), (3, 7), (7, 3)]:
        if max(p) <= n_max:
            pts.add(p)
    return sorted(pts)


def verify_moments(
    spec: ClassSpec,
    config: FrequencyConfig,
    fixed,
    n_range: int = 20,
    tol: float = 1e-8,
    density: MeasureDensity | None = None,
    quad: QuadSpec = QuadSpec(),
) -> VerificationReport:
    """Relative residuals |integral/target - 1| over the probe lattice."""
    fixed = tuple(int(v) for v in fixed)
    density = density_for(spec, config, fixed) if density is None else density
    residuals = []
    for n in probe_lattice(len(spec.summed), n_range):
        integral = moment_integral(spec, config, fixed, n, density=density, quad=quad)
        target = moment_target(spec, config, fixed, n)
        residuals.append((",".join(map(str, n)), integral.rel_diff(target)))
    return make_report(
        spec.id,
        "moment",
        residuals,
        tol,
        metadata=(
            ("omegas", list(config.omegas)),
            ("shifts", list(config.shifts)),
            ("fixed", list(fixed)),
            ("n_range", n_range),
            ("quad_nodes", quad.nodes),
            ("density_note", density.note),
        ),
    )


def nonuniqueness_partner(spec: ClassSpec, config: FrequencyConfig, fixed) -> MeasureDensity:
    """A second density matching the same fixed-index moment set.

    The second-variable exponent of the (g1,1)B sub-class is the bare
    vector index, so only the single moment order n2 is constrained
    there; a reshaped gamma density u2 e^(-u2/w2) / ((n2+1) w2^2)
    reproduces it while differing from f(r2, w2) pointwise.
    """
    if spec.id != "2d.2dof.gamma1-plain.B":
        raise SpecError("the cataloged non-uniqueness exhibit lives on 2d.2dof.gamma1-plain.B")
    base = density_for(spec, config, fixed)
    n2 = fixed[0]
    w2 = config.omega(2)
    return MeasureDensity(
        base.spec_id,
        base.variables,
        base.log_const - math.log(n2 + 1.0) - math.log(w2),
        base.powers + ((2, 1.0),),
        base.exp_terms,
        note="nonuniqueness partner (reshaped second-variable gamma density)",
    )

