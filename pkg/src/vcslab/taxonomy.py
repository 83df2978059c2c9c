"""Classification machinery: sub-class relevance, factor relations,
deformation limits, class counting, shift extension, Landau mapping.

A ratio limit kappa -> 0 is *defined* when the structurally reduced
class is still solvable, which fails two ways: the class also uses the
reciprocal ratio (sent to infinity), or the limit strips the last
dependence on a summed index so the norm series acquires constant
terms.  Both rules are purely structural and are cross-confirmed
numerically through the convergence module.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .convergence import class_verdict
from .frequencies import FrequencyConfig
from .norms import state
from .registry import FAMILY_QUADRUPLES, ONE_DOF_QUADRUPLES, get, registry
from .report import VerificationReport, make_report
from .structure import ClassSpec, LinForm, SpecError

_SWAP = {1: 2, 2: 1}


# -- factor relations --------------------------------------------------

# one multiplicative piece of a factor: base ** (scalar * exponent(n_fixed))
#   base: ("z", tower) | ("omega", tower) | ("factorial", tower)
#   exponent: "nf" -> n_fixed, "knf" -> kappa(summed, fixed) * n_fixed
@dataclass(frozen=True)
class FactorComponent:
    base: tuple[str, int]
    scalar: float
    exponent: str  # "nf" | "knf"


@dataclass(frozen=True)
class FactorRelation:
    sub_a: str  # base class
    sub_b: str  # class equal to factor * base
    components: tuple[FactorComponent, ...]

    def log_value(self, config: FrequencyConfig, fixed_tower: int, n_fixed: int,
                  summed_tower: int, z) -> complex:
        """Complex log of the factor at the given parameters."""
        out = 0.0 + 0.0j
        for comp in self.components:
            kind, tower = comp.base
            if kind == "factorial":
                # the base itself carries the index dependence: (n_f!)^scalar
                out += comp.scalar * math.lgamma(n_fixed + 1.0)
                continue
            if comp.exponent == "nf":
                e = comp.scalar * n_fixed
            elif comp.exponent == "knf":
                e = comp.scalar * config.ratio(summed_tower, fixed_tower) * n_fixed
            else:
                raise SpecError(f"unknown factor exponent {comp.exponent!r}")
            if kind == "z":
                v = complex(z[tower])
                out += e * complex(math.log(abs(v)), math.atan2(v.imag, v.real))
            elif kind == "omega":
                out += e * math.log(config.omega(tower))
            else:
                raise SpecError(f"unknown factor base {kind!r}")
        return out


def declared_factor_relations() -> list[FactorRelation]:
    """The cataloged sub-class factor statements."""
    out = []
    for s, f in ((1, 2), (2, 1)):
        plain = f"2d.1dof.plain{s}"
        gamma = f"2d.1dof.gamma{s}"
        zc = ("z", s)
        wc = ("omega", s)
        out += [
            FactorRelation(f"{plain}.A", f"{plain}.B", (FactorComponent(wc, -0.5, "knf"),)),
            FactorRelation(f"{plain}.A", f"{plain}.C", (FactorComponent(zc, 1.0, "knf"),)),
            FactorRelation(
                f"{plain}.A",
                f"{plain}.D",
                (FactorComponent(zc, 1.0, "knf"), FactorComponent(wc, -0.5, "knf")),
            ),
            FactorRelation(f"{gamma}.A", f"{gamma}.B", (FactorComponent(zc, -1.0, "knf"),)),
            FactorRelation(f"{gamma}.A", f"{gamma}.C", (FactorComponent(wc, 0.5, "knf"),)),
            FactorRelation(
                f"{gamma}.A",
                f"{gamma}.D",
                (FactorComponent(zc, -1.0, "knf"), FactorComponent(wc, 0.5, "knf")),
            ),
        ]
    # the two-variable deformed class is the one-variable one times the
    # second-tower canonical factor z2^n2 [w2^n2 n2!]^(-1/2)
    out.append(
        FactorRelation(
            "2d.1dof.gamma1.A",
            "2d.2dof.gamma1-plain.A",
            (
                FactorComponent(("z", 2), 1.0, "nf"),
                FactorComponent(("omega", 2), -0.5, "nf"),
                FactorComponent(("factorial", 2), -0.5, "nf"),
            ),
        )
    )
    return out


def verify_factor(
    relation: FactorRelation,
    config: FrequencyConfig,
    fixed_value: int = 2,
    z=None,
    n_probe: int = 8,
    tol: float = 1e-10,
) -> VerificationReport:
    """Check b-coefficients = factor * a-coefficients, independent of the sum index."""
    spec_a = get(relation.sub_a)
    spec_b = get(relation.sub_b)
    s = spec_a.summed[0]
    f = spec_a.fixed[0]
    if z is None:
        z = {t: 0.9 + 0.2 * t + 0.1j for t in set(spec_a.tower_ids) | set(spec_b.tower_ids)}
    log_factor = relation.log_value(config, f, fixed_value, s, z)
    ratios = []
    for n in range(n_probe):
        nv_a = spec_a.quantum_numbers((n,), (fixed_value,))
        nv_b = spec_b.quantum_numbers((n,), (fixed_value,))
        za = [z[t] for t in spec_a.tower_ids]
        zb = [z[t] for t in spec_b.tower_ids]
        log_a = 0.5 * spec_a.log_coeff_sq(nv_a, [abs(v) for v in za], config) + 1j * spec_a.coeff_phase(
            nv_a, [math.atan2(v.imag, v.real) for v in za], config
        )
        log_b = 0.5 * spec_b.log_coeff_sq(nv_b, [abs(v) for v in zb], config) + 1j * spec_b.coeff_phase(
            nv_b, [math.atan2(v.imag, v.real) for v in zb], config
        )
        ratios.append(log_b - log_a)
    import cmath

    vals = [cmath.exp(r) for r in ratios]
    target = cmath.exp(log_factor)
    residuals = [(f"n={n}", abs(v - target) / abs(target)) for n, v in enumerate(vals)]
    mean = sum(vals) / len(vals)
    variance = sum(abs(v - mean) ** 2 for v in vals) / len(vals) / abs(mean) ** 2
    residuals.append(("ratio_variance", variance / 1e-10))  # scaled into the same tolerance
    return make_report(
        f"{relation.sub_b}~{relation.sub_a}",
        "factor",
        residuals,
        tol,
        metadata=(
            ("factor_components", [f"{c.base}^({c.scalar}*{c.exponent})" for c in relation.components]),
            ("fixed_value", fixed_value),
            ("ratio_variance", variance),
        ),
    )


# -- sub-class enumeration ---------------------------------------------


def enumerate_subclasses(class_family: str, keep_alpha_fixed: bool = True):
    """All exponent quadruples of a family, labeled by relevance.

    Returns (quadruple, relevance, detail) triples where relevance is
    "base", "relevant", or "factor"; factors name the registered
    sub-class they multiply and the factor itself.
    """
    if not keep_alpha_fixed:
        raise SpecError("only the unit leading-exponent enumeration is cataloged")
    if class_family in FAMILY_QUADRUPLES:
        quads = FAMILY_QUADRUPLES[class_family]
        base_b1 = quads["A"][:2]
        letter_of = {q[2:]: letter for letter, q in quads.items()}
        out = []
        for b1, b1p, b2, b2p in itertools.product((0, 1), repeat=4):
            quad = (b1, b1p, b2, b2p)
            letter = letter_of[(b2, b2p)]
            target = f"2d.2dof.{class_family}.{letter}"
            if (b1, b1p) == base_b1:
                out.append((quad, "base" if letter == "A" else "relevant", target))
            else:
                d1, d1p = b1 - base_b1[0], b1p - base_b1[1]
                desc = _z_omega_factor(1, d1, d1p)
                out.append((quad, "factor", f"{target} * {desc}"))
        return out
    if class_family in ("plain", "gamma"):
        # one-variable sub-classes: the exponent variants multiply A by a
        # prefactor in the fixed index only, so B-D are all factors
        quads = ONE_DOF_QUADRUPLES[class_family]
        base = quads["A"]
        out = []
        for b, bp in itertools.product((0, 1), repeat=2):
            letter = {v: k for k, v in quads.items()}[(b, bp)]
            target = f"2d.1dof.{class_family}1.{letter}"
            if (b, bp) == base:
                out.append(((b, bp), "base", target))
            else:
                d, dp = b - base[0], bp - base[1]
                out.append(((b, bp), "factor", f"{target} = A * {_z_omega_factor(1, d, dp)}"))
        return out
    raise SpecError(f"unknown family {class_family!r}")


def _z_omega_factor(tower: int, dz: int, dw: int) -> str:
    parts = []
    if dz:
        parts.append(f"z{tower}^({dz:+d}*k*nf)")
    if dw:
        parts.append(f"omega{tower}^({-dw / 2:+g}*k*nf)")
    return " ".join(parts) if parts else "1"


# -- deformation graph -------------------------------------------------


@dataclass(frozen=True)
class DeformationEdge:
    ancestor: str
    descendant: str | None
    parameter: tuple[int, int]
    status: str  # "defined" | "forbidden"
    reason: str = ""
    via_symmetry: bool = False


def _axis_dependence_survives(spec: ClassSpec, axis: int) -> bool:
    if axis in spec.tower_ids:
        return True
    for tw in spec.towers:
        for form in (tw.z_exp, tw.w_exp, tw.gamma):
            if form.depends_on_n(axis):
                return True
    return False


def _strip_shift_terms(form: LinForm) -> tuple:
    return tuple(sorted((t for t in form.terms if t[2] is None), key=repr))


def canonical_signature(spec: ClassSpec) -> tuple:
    """Structural identity of a class: towers, exponents, Gamma slopes.

    Shift terms are dropped and constant-argument Gamma factors identify
    with plain factorials, so a structurally reduced class matches its
    registered descendant.
    """
    sig = []
    for tw in sorted(spec.towers, key=lambda w: w.tower):
        gamma_moving = tuple(sorted((t for t in tw.gamma.terms if t[1] is not None), key=repr))
        sig.append(
            (
                tw.tower,
                _strip_shift_terms(tw.z_exp),
                _strip_shift_terms(tw.w_exp),
                gamma_moving,
            )
        )
    return (tuple(sig), spec.summed, spec.fixed)


def _descendant_lookup():
    table = {}
    for s in registry():
        table.setdefault(canonical_signature(s), (s.id, False))
    for s in registry():
        if s.dimension == 3:
            image = s.relabeled(_SWAP)
            table.setdefault(canonical_signature(image), (s.id, True))
    return table


def deformation_graph(dimension: int, dof: int) -> list[DeformationEdge]:
    """Ancestor/descendant edges under single-ratio limits kappa -> 0."""
    if (dimension, dof) not in ((2, 1), (2, 2), (3, 2)):
        raise SpecError(f"unsupported (dimension, dof) = ({dimension}, {dof})")
    lookup = _descendant_lookup()
    edges = []
    for spec in registry():
        if spec.dimension != dimension or spec.dof != dof:
            continue
        if dimension == 3 and spec.dof != dof:
            continue
        for pair in sorted(spec.ratios_used()):
            rev = (pair[1], pair[0])
            if rev in spec.ratios_used():
                edges.append(
                    DeformationEdge(
                        spec.id, None, pair, "forbidden",
                        reason=f"reciprocal ratio kappa{rev[0]}{rev[1]} diverges",
                    )
                )
                continue
            limit = spec.drop_ratio(pair)
            dead = [a for a in spec.summed if not _axis_dependence_survives(limit, a)]
            if dead:
                edges.append(
                    DeformationEdge(
                        spec.id, None, pair, "forbidden",
                        reason=f"summed index n{dead[0]} decouples: constant terms, not normalizable",
                    )
                )
                continue
            found = lookup.get(canonical_signature(limit))
            if found is None:
                raise SpecError(f"{spec.id}: defined limit kappa{pair} leaves an unregistered class")
            desc_id, via_sym = found
            edges.append(DeformationEdge(spec.id, desc_id, pair, "defined", via_symmetry=via_sym))
    return edges


def confirm_forbidden_edge(edge: DeformationEdge, config: FrequencyConfig, fixed) -> bool:
    """Numerical confirmation that a forbidden limit really diverges."""
    spec = get(edge.ancestor)
    try:
        v = class_verdict(spec, config, fixed, overrides={edge.parameter: 0.0})
    except ZeroDivisionError:
        return True  # reciprocal ratio pinned to infinity: undefined as claimed
    return v.divergent


def verify_edge_continuity(
    edge: DeformationEdge,
    config: FrequencyConfig,
    fixed,
    kappa_small: float = 1e-6,
    tol: float = 1e-4,
    window: int = 5,
) -> VerificationReport:
    """Coefficients of the ancestor at kappa = eps approach the descendant's."""
    if edge.status != "defined":
        raise SpecError("continuity applies to defined edges")
    anc = get(edge.ancestor)
    desc = get(edge.descendant)
    z = tuple(0.8 * math.sqrt(config.omega(t)) for t in anc.tower_ids)
    nmax = (window,) * len(anc.summed)
    st_a = state(anc, config, z, fixed, nmax, overrides={edge.parameter: kappa_small})
    if edge.via_symmetry:
        perm_omegas = list(config.omegas)
        perm_shifts = list(config.shifts)
        perm_omegas[0], perm_omegas[1] = perm_omegas[1], perm_omegas[0]
        perm_shifts[0], perm_shifts[1] = perm_shifts[1], perm_shifts[0]
        cfg_d = FrequencyConfig(tuple(perm_omegas), tuple(perm_shifts))
        zmap = {t: v for t, v in zip(anc.tower_ids, z)}
        z_d = tuple(zmap[_SWAP.get(t, t)] for t in desc.tower_ids)
        st_d = state(desc, cfg_d, z_d, fixed, nmax)
        index_map = lambda n: tuple(reversed(n)) if len(n) == 2 else n
    else:
        z_d = tuple(z[anc.tower_ids.index(t)] for t in desc.tower_ids)
        st_d = state(desc, config, z_d, fixed, nmax)
        index_map = lambda n: n
    residuals = []
    for n, c in st_a.coeffs.items():
        d = st_d.coefficient(index_map(n))
        residuals.append(("c" + str(n), abs(c - d)))
    return make_report(
        f"{edge.ancestor}->{edge.descendant}",
        "limit-continuity",
        residuals,
        tol,
        metadata=(("parameter", list(edge.parameter)), ("kappa", kappa_small)),
    )


def collapse_to_classes(edges: list[DeformationEdge]) -> list[DeformationEdge]:
    """Collapse 2D sub-class nodes onto their class representative (A).

    The 3D entries are already class-level.  Edges that become parallel
    under the collapse are merged.
    """

    def rep(cid: str | None) -> str | None:
        if cid is None:
            return None
        s = get(cid)
        if s.dimension == 2:
            return f"2d.{s.dof}dof.{s.family}.A"
        return cid

    seen: dict[tuple, DeformationEdge] = {}
    for e in edges:
        key = (rep(e.ancestor), rep(e.descendant), e.parameter, e.status)
        if key not in seen:
            seen[key] = DeformationEdge(
                key[0], key[1], e.parameter, e.status, e.reason, e.via_symmetry
            )
    return list(seen.values())


# -- class counting ----------------------------------------------------

_FORM_TOKENS = ("plain", "own1", "own2", "both")  # per-tower dependence pattern


def _pair_orbits_case12() -> list[frozenset]:
    """Orbits of the 16 (rho1, rho2) pairs under the tower swap."""
    # encode rho1 by which other indexes feed its Gamma: -, {2}, {3}, {2,3}
    forms1 = ("-", "2", "3", "23")
    forms2 = ("-", "1", "3", "13")

    def swap(pair):
        f1, f2 = pair
        m1 = {"-": "-", "2": "1", "3": "3", "23": "13"}
        m2 = {"-": "-", "1": "2", "3": "3", "13": "23"}
        return (m2[f2], m1[f1])

    orbits = []
    seen = set()
    for pair in itertools.product(forms1, forms2):
        if pair in seen:
            continue
        orb = frozenset({pair, swap(pair)})
        for p in orb:
            seen.add(p)
        orbits.append(orb)
    return orbits


def class_counts(dimension: int, dof: int, case: str | None = None) -> int:
    """Computed class counts (generation and quotient, not hard-coded)."""
    if dimension != 3 or dof not in (2, 3):
        raise SpecError(f"counting is defined for 3D with 2 or 3 variables, got ({dimension},{dof})")
    n12 = len(_pair_orbits_case12())
    if dof == 2:
        # case (13): both summed indices must appear among the factors;
        # rho1 always carries n1, so n2 must enter rho1 or rho3
        n13 = 0
        for f1 in ("-", "2", "3", "23"):
            for f3 in ("-", "1", "2", "12"):
                if "2" in f1 or "2" in f3:
                    n13 += 1
        if case == "12":
            return n12
        if case == "13":
            return n13
        if case is None:
            return n12 + n13
        raise SpecError(f"unknown case {case!r}")
    # three variables: the expansion-sector orbits combine with the four
    # third-tower forms, counted as distinct deformation patterns
    return n12 * 4


# -- shift extension and the Landau problem -----------------------------


def shift_extension(spec: ClassSpec, alphas) -> ClassSpec:
    """Validate a spectrum shift for a class.

    Shifts enter through FrequencyConfig (every registered exponent and
    Gamma offset already carries its shift terms), so the returned spec
    is the input; this is the place that rejects invalid shifts.
    """
    alphas = tuple(float(a) for a in alphas)
    if any(a < 0.0 for a in alphas):
        raise SpecError("shifts must be non-negative")
    if len(alphas) < spec.dimension:
        raise SpecError(f"{spec.id}: needs {spec.dimension} shifts")
    return spec


@dataclass(frozen=True)
class LandauOscillator:
    """Two-mode oscillator equivalent of a charged particle in a magnetic
    field with an added harmonic potential."""

    omega_plus: float
    omega_minus: float
    degenerate: bool

    @property
    def shifts(self) -> tuple[float, float]:
        return (0.5, 0.5)

    def config(self) -> FrequencyConfig:
        if self.degenerate:
            raise SpecError(
                "degenerate limit: the lower mode frequency vanishes and the "
                "spectrum becomes infinitely degenerate"
            )
        return FrequencyConfig((self.omega_plus, self.omega_minus), shifts=self.shifts)


def landau_map(cyclotron: float, potential: float) -> LandauOscillator:
    """Mode frequencies (+-cyclotron + sqrt(cyclotron^2 + potential^2))."""
    if cyclotron < 0.0 or potential < 0.0:
        raise ValueError("frequencies must be non-negative")
    if cyclotron == 0.0 and potential == 0.0:
        raise ValueError("cyclotron and potential frequencies cannot both vanish")
    root = math.hypot(cyclotron, potential)
    plus = cyclotron + root
    minus = -cyclotron + root
    return LandauOscillator(plus, minus, degenerate=(minus == 0.0))


# -- graph export -------------------------------------------------------


def graph_to_dot(edges: list[DeformationEdge]) -> str:
    lines = ["digraph deformation {"]
    nodes = sorted({e.ancestor for e in edges} | {e.descendant for e in edges if e.descendant})
    for n in nodes:
        lines.append(f'  "{n}";')
    for e in sorted(edges, key=lambda e: (e.ancestor, e.parameter)):
        attr = f'status={e.status}, label="k{e.parameter[0]}{e.parameter[1]}->0"'
        if e.status == "forbidden":
            target = f'"{e.ancestor}__k{e.parameter[0]}{e.parameter[1]}_forbidden"'
            lines.append(f"  {target} [shape=point, label=\"\"];")
            lines.append(f'  "{e.ancestor}" -> {target} [{attr}, style=dashed, color=red];')
        else:
            style = ", style=dotted" if e.via_symmetry else ""
            lines.append(f'  "{e.ancestor}" -> "{e.descendant}" [{attr}{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json(edges: list[DeformationEdge]) -> list[dict]:
    return [
        {
            "ancestor": e.ancestor,
            "descendant": e.descendant,
            "parameter": f"kappa{e.parameter[0]}{e.parameter[1]}",
            "status": e.status,
            "reason": e.reason,
            "via_symmetry": e.via_symmetry,
        }
        for e in sorted(edges, key=lambda e: (e.ancestor, e.parameter))
    ]
