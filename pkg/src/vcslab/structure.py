"""Structural description of a coherent-state class.

A class is a finite bundle of towers.  Each tower contributes

    rho_t(n) = omega_t^(w_exp_t(n)) * R_t(n),
    R_t(n)   = Gamma(gamma_t(n) + n_t)            (bare form), or
               Gamma(gamma_t(n) + n_t)/Gamma(gamma_t(n))   (normalized form),

and a complex variable z_t raised to z_exp_t(n).  All exponents and
Gamma offsets are linear in the quantum numbers with coefficients drawn
from {1} and the frequency ratios, plus shift constants, which is
exactly the algebra LinForm encodes.  Everything downstream (norm
series, moment targets, selection rules, deformation limits) is derived
from this one representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .frequencies import FrequencyConfig, RatioOverrides, resolve_ratio
from .special import log_gamma

# One additive term: coefficient (a frequency ratio, or 1 when None)
# times a quantum number (n_of) or a shift constant (shift_of) or 1.
Term = tuple[tuple[int, int] | None, int | None, int | None]


def _term_value(
    term: Term,
    nvals: Mapping[int, int],
    config: FrequencyConfig,
    overrides: RatioOverrides | None,
) -> float:
    ratio, n_of, shift_of = term
    v = 1.0
    if ratio is not None:
        v *= resolve_ratio(config, ratio, overrides)
    if v == 0.0:
        return 0.0
    if n_of is not None:
        v *= nvals[n_of]
    if shift_of is not None:
        v *= config.shift(shift_of)
    return v


@dataclass(frozen=True)
class LinForm:
    terms: tuple[Term, ...]

    def value(
        self,
        nvals: Mapping[int, int],
        config: FrequencyConfig,
        overrides: RatioOverrides | None = None,
    ) -> float:
        return sum(_term_value(t, nvals, config, overrides) for t in self.terms)

    def __add__(self, other: "LinForm") -> "LinForm":
        return LinForm(self.terms + other.terms)

    def depends_on_n(self, tower: int) -> bool:
        return any(t[1] == tower for t in self.terms)

    def n_coefficient(
        self,
        tower: int,
        config: FrequencyConfig,
        overrides: RatioOverrides | None = None,
    ) -> float:
        """Coefficient multiplying n_tower (ratios resolved numerically)."""
        total = 0.0
        for ratio, n_of, shift_of in self.terms:
            if n_of != tower:
                continue
            c = 1.0 if ratio is None else resolve_ratio(config, ratio, overrides)
            if shift_of is not None:
                c *= config.shift(shift_of)
            total += c
        return total

    def n_coefficient_terms(self, tower: int) -> tuple[Term, ...]:
        return tuple(t for t in self.terms if t[1] == tower)

    def ratios_used(self) -> set[tuple[int, int]]:
        return {t[0] for t in self.terms if t[0] is not None}

    def drop_ratio(self, pair: tuple[int, int]) -> "LinForm":
        """The kappa(pair) -> 0 limit: delete every term carrying that ratio."""
        return LinForm(tuple(t for t in self.terms if t[0] != pair))

    def relabeled(self, perm: Mapping[int, int]) -> "LinForm":
        def p(t: int | None) -> int | None:
            return None if t is None else perm.get(t, t)

        out = []
        for ratio, n_of, shift_of in self.terms:
            new_ratio = None if ratio is None else (p(ratio[0]), p(ratio[1]))
            out.append((new_ratio, p(n_of), p(shift_of)))
        return LinForm(tuple(out))


def lf(*terms: Term) -> LinForm:
    return LinForm(tuple(terms))


def lf_zero() -> LinForm:
    return LinForm(())


def t_one() -> Term:
    return (None, None, None)


def t_n(tower: int) -> Term:
    return (None, tower, None)


def t_shift(tower: int) -> Term:
    return (None, None, tower)


def t_ratio_n(i: int, j: int, tower: int) -> Term:
    return ((i, j), tower, None)


def t_ratio_shift(i: int, j: int, tower: int) -> Term:
    return ((i, j), None, tower)


@dataclass(frozen=True)
class TowerTerm:
    """One tower's factorial, frequency exponent, and variable exponent."""

    tower: int
    z_exp: LinForm
    w_exp: LinForm
    gamma: LinForm
    normalized: bool

    def gamma_value(
        self,
        nvals: Mapping[int, int],
        config: FrequencyConfig,
        overrides: RatioOverrides | None = None,
    ) -> float:
        return self.gamma.value(nvals, config, overrides)

    def log_radial(
        self,
        nvals: Mapping[int, int],
        config: FrequencyConfig,
        overrides: RatioOverrides | None = None,
    ) -> float:
        """log R_t(n)."""
        g = self.gamma_value(nvals, config, overrides)
        out = log_gamma(g + nvals[self.tower])
        if self.normalized:
            out -= log_gamma(g)
        return out

    @property
    def form(self) -> str:
        """Factorial form tag: 'plain', 'gamma(j)' or 'gamma(j,k)'."""
        deps = sorted({t[1] for t in self.gamma.terms if t[1] is not None})
        if not deps:
            return "plain"
        return "gamma(" + ",".join(str(d) for d in deps) + ")"

    @property
    def gamma_deps(self) -> tuple[int, ...]:
        return tuple(sorted({t[1] for t in self.gamma.terms if t[1] is not None}))

    def relabeled(self, perm: Mapping[int, int]) -> "TowerTerm":
        return TowerTerm(
            tower=perm.get(self.tower, self.tower),
            z_exp=self.z_exp.relabeled(perm),
            w_exp=self.w_exp.relabeled(perm),
            gamma=self.gamma.relabeled(perm),
            normalized=self.normalized,
        )

    def drop_ratio(self, pair: tuple[int, int]) -> "TowerTerm":
        return TowerTerm(
            tower=self.tower,
            z_exp=self.z_exp.drop_ratio(pair),
            w_exp=self.w_exp.drop_ratio(pair),
            gamma=self.gamma.drop_ratio(pair),
            normalized=self.normalized,
        )


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class ClassSpec:
    """Complete description of one registered coherent-state class."""

    id: str
    label: str
    dimension: int
    summed: tuple[int, ...]
    fixed: tuple[int, ...]
    towers: tuple[TowerTerm, ...]
    family: str = ""
    subclass: str = ""
    quadruple: tuple[int, int, int, int] | None = None
    case: str = ""

    def __post_init__(self):
        if set(self.summed) & set(self.fixed):
            raise SpecError(f"{self.id}: summed and fixed towers overlap")
        referenced = set()
        for tw in self.towers:
            referenced.add(tw.tower)
            for form in (tw.z_exp, tw.w_exp, tw.gamma):
                referenced |= {t[1] for t in form.terms if t[1] is not None}
        if not referenced <= set(self.summed) | set(self.fixed):
            raise SpecError(f"{self.id}: tower referenced outside summed+fixed sets")
        if len({tw.tower for tw in self.towers}) != len(self.towers):
            raise SpecError(f"{self.id}: duplicate tower entries")

    @property
    def dof(self) -> int:
        """Number of complex variables the state is expanded in."""
        return len(self.towers)

    @property
    def tower_ids(self) -> tuple[int, ...]:
        return tuple(tw.tower for tw in self.towers)

    def tower(self, t: int) -> TowerTerm:
        for tw in self.towers:
            if tw.tower == t:
                return tw
        raise KeyError(f"{self.id} has no tower {t}")

    def quantum_numbers(
        self, summed_values, fixed_values
    ) -> dict[int, int]:
        if len(summed_values) != len(self.summed):
            raise SpecError(
                f"{self.id}: expected {len(self.summed)} summed values, got {len(summed_values)}"
            )
        if len(fixed_values) != len(self.fixed):
            raise SpecError(
                f"{self.id}: expected {len(self.fixed)} fixed values, got {len(fixed_values)}"
            )
        nvals = dict(zip(self.summed, summed_values))
        nvals.update(zip(self.fixed, fixed_values))
        if any(v < 0 for v in nvals.values()):
            raise SpecError("quantum numbers must be non-negative")
        return nvals

    # -- evaluation ----------------------------------------------------

    def log_radial_product(self, nvals, config, overrides=None) -> float:
        """log of the product of all tower factorials; the moment target."""
        return sum(tw.log_radial(nvals, config, overrides) for tw in self.towers)

    def log_rho(self, nvals, config, overrides=None) -> float:
        """log of the full generalized factorial product (omega powers included)."""
        out = 0.0
        for tw in self.towers:
            out += tw.w_exp.value(nvals, config, overrides) * math.log(config.omega(tw.tower))
            out += tw.log_radial(nvals, config, overrides)
        return out

    def log_coeff_sq(self, nvals, zabs, config, overrides=None) -> float:
        """log |a(n)|^2 of the unnormalized coefficient at |z_t| = zabs[t]."""
        out = 0.0
        for tw, r in zip(self.towers, zabs):
            e = tw.z_exp.value(nvals, config, overrides)
            if r == 0.0:
                if e > 0.0:
                    return float("-inf")
                if e < 0.0:
                    raise SpecError("negative variable exponent at z = 0")
                # e == 0: factor is exactly 1
            else:
                out += 2.0 * e * math.log(r)
        return out - self.log_rho(nvals, config, overrides)

    def coeff_phase(self, nvals, z_args, config, overrides=None) -> float:
        """arg a(n) from the variable phases (z_args[t] = arg z_t)."""
        return sum(
            tw.z_exp.value(nvals, config, overrides) * th
            for tw, th in zip(self.towers, z_args)
        )

    # -- structural transforms -----------------------------------------

    def ratios_used(self) -> set[tuple[int, int]]:
        out: set[tuple[int, int]] = set()
        for tw in self.towers:
            for form in (tw.z_exp, tw.w_exp, tw.gamma):
                out |= form.ratios_used()
        return out

    def drop_ratio(self, pair: tuple[int, int]) -> "ClassSpec":
        """Structural kappa(pair) -> 0 limit (id/labels left to the caller)."""
        return ClassSpec(
            id=self.id + f".limit{pair[0]}{pair[1]}",
            label=self.label,
            dimension=self.dimension,
            summed=self.summed,
            fixed=self.fixed,
            towers=tuple(tw.drop_ratio(pair) for tw in self.towers),
            family=self.family,
            subclass=self.subclass,
            quadruple=self.quadruple,
            case=self.case,
        )

    def relabeled(self, perm: Mapping[int, int], new_id: str | None = None) -> "ClassSpec":
        return ClassSpec(
            id=new_id or (self.id + ".swapped"),
            label=self.label,
            dimension=self.dimension,
            summed=tuple(sorted(perm.get(t, t) for t in self.summed)),
            fixed=tuple(sorted(perm.get(t, t) for t in self.fixed)),
            towers=tuple(
                tw.relabeled(perm)
                for tw in sorted(self.towers, key=lambda w: perm.get(w.tower, w.tower))
            ),
            family=self.family,
            subclass=self.subclass,
            quadruple=self.quadruple,
            case=self.case,
        )

    def structure_key(self) -> tuple:
        """Hashable structural signature used for symmetry identification."""

        def form_key(form: LinForm) -> tuple:
            return tuple(sorted(form.terms, key=repr))

        return tuple(
            (tw.tower, form_key(tw.z_exp), form_key(tw.w_exp), form_key(tw.gamma), tw.normalized)
            for tw in sorted(self.towers, key=lambda w: w.tower)
        ) + (self.summed, self.fixed)
