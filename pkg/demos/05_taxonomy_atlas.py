#!/usr/bin/env python3
"""The classification atlas: counts, sub-classes, deformation graph.

Class counts come from generation and quotient under the tower swap;
sub-class quadruples split into a base, the relevant variants, and
exponent factors; and the single-ratio limits organize everything into
ancestor/descendant chains with structurally forbidden arrows.
"""

from vcslab import FrequencyConfig, class_counts, deformation_graph, enumerate_subclasses
from vcslab.registry import select
from vcslab.taxonomy import (
    collapse_to_classes,
    declared_factor_relations,
    graph_to_dot,
    verify_edge_continuity,
    verify_factor,
)

print("== computed class counts ==")
print(f" 3D two-variable, case (12): {class_counts(3, 2, case='12')}")
print(f" 3D two-variable, case (13): {class_counts(3, 2, case='13')}")
print(f" 3D two-variable total:      {class_counts(3, 2)}")
print(f" 3D three-variable:          {class_counts(3, 3)}")
print(f" registry entries: {len(select())}")

print("\n== sub-class relevance partition (doubly-deformed family) ==")
rows = enumerate_subclasses("gamma1-gamma2")
for quad, kind, detail in rows:
    if kind != "factor":
        print(f" {quad}  {kind:8s} {detail}")
n_factors = sum(1 for _, kind, _ in rows if kind == "factor")
print(f" ... plus {n_factors} exponent-factor variants")

print("\n== factor relations verify with constant ratios ==")
cfg = FrequencyConfig((1.0, 2.0))
for rel in declared_factor_relations()[:4]:
    rep = verify_factor(rel, cfg, fixed_value=3)
    print(f" {rel.sub_b} = factor * {rel.sub_a}: {rep.verdict}"
          f" (variance {dict(rep.metadata)['ratio_variance']:.1e})")

print("\n== deformation graph, 3D two-variable ==")
edges = deformation_graph(3, 2)
defined = [e for e in edges if e.status == "defined"]
forbidden = [e for e in edges if e.status == "forbidden"]
print(f" {len(defined)} defined limits, {len(forbidden)} forbidden")
cfg3 = FrequencyConfig((1.0, 2.0, 3.0))
e = next(e for e in defined if e.via_symmetry)
print(f" symmetry-identified example: {e.ancestor} --k{e.parameter[0]}{e.parameter[1]}->0--> {e.descendant}")
rep = verify_edge_continuity(e, cfg3, (1,))
print(f"   coefficient continuity at kappa = 1e-6: max |dc| = {rep.max_residual:.2e}")
for e in forbidden[:3]:
    print(f" forbidden: {e.ancestor} [k{e.parameter[0]}{e.parameter[1]} -> 0] -- {e.reason}")

print("\n== class-level 2D graph (DOT) ==")
print(graph_to_dot(collapse_to_classes(deformation_graph(2, 2))))
