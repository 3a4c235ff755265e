"""Named building blocks addressable from scenario files.

Short spec strings keep scenario JSON readable: coefficient rings
("Fp:2", "Z", "Zmod:4"), groups ("cyclic:6", "sigma3", raw tables),
modules over a chosen group ("regular", "sign", "regular-of-subgroup:3"),
graded algebra presentations with the group they are checked against,
and simplicial fibration models ("cross-polytope:2",
"three-points-rotation").  Everything listed by list_builtins is built
and validated on the spot, so the listing doubles as a smoke test of
the builders.
"""

from __future__ import annotations

from .emss import (GradedAlgebraPresentation, GradedModulePresentation,
                   GSimplicialComplex, cross_polytope_sphere, discrete_gset,
                   validate_presentation)
from .errors import ScenarioError
from .groups import FiniteGroup, GModule, make_group
from .linalg import Fp, Matrix, ZZ, Zmod


def resolve_ring(spec: str):
    if spec == "Z":
        return ZZ
    kind, sep, arg = spec.partition(":")
    if sep and kind in ("Fp", "Zmod"):
        try:
            m = int(arg)
        except ValueError:
            raise ScenarioError(f"modulus {arg!r} is not an integer") from None
        if m < 2:
            raise ScenarioError("modulus must be at least 2")
        return Fp(m) if kind == "Fp" else Zmod(m)
    raise ScenarioError(f"unknown coefficient spec {spec!r}")


GROUP_ALIASES = {
    "sigma3": lambda: FiniteGroup.symmetric(3),
    "klein": lambda: FiniteGroup.product(FiniteGroup.cyclic(2),
                                         FiniteGroup.cyclic(2)),
}


def resolve_group(spec) -> FiniteGroup:
    if isinstance(spec, str) and spec in GROUP_ALIASES:
        return GROUP_ALIASES[spec]()
    return make_group(spec)


def _cyclic_generator(group: FiniteGroup) -> int:
    for g in group.elements():
        if group.element_order(g) == group.order:
            return g
    raise ScenarioError(f"{group.label} is not cyclic")


def _quotient_of_order(group: FiniteGroup, m: int):
    """Quotient map onto a quotient of the requested order, if one exists."""
    if m < 1 or group.order % m:
        raise ScenarioError(f"no quotient of order {m} in {group.label}")
    for sub in sorted(group.subgroups(), key=lambda s: tuple(s)):
        if len(sub) == group.order // m and group.is_normal(sub):
            q, hom, _ = group.quotient_by(sub)
            return q, hom
    raise ScenarioError(f"no normal subgroup of index {m} in {group.label}")


def resolve_module(spec, group: FiniteGroup, ring) -> GModule:
    if isinstance(spec, dict):
        if "action" not in spec:
            raise ScenarioError("module dict needs an 'action' list")
        mats = [Matrix(ring, rows) for rows in spec["action"]]
        rank = mats[0].rows if mats else 0
        return GModule(group, ring, rank, mats)
    if not isinstance(spec, str):
        raise ScenarioError(f"cannot build a module from {type(spec).__name__}")
    kind, sep, arg = spec.partition(":")
    if kind == "trivial":
        rank = int(arg) if sep else 1
        return GModule.trivial(group, ring, rank)
    if kind == "regular" and not sep:
        return GModule.regular(group, ring)
    if kind == "sign" and not sep:
        gen = _cyclic_generator(group)
        return GModule.from_generator_matrix(group, ring, gen,
                                             Matrix(ring, [[-1]]))
    if kind == "regular-of-subgroup":
        if not sep:
            raise ScenarioError("regular-of-subgroup needs an order")
        q, hom = _quotient_of_order(group, int(arg))
        return GModule.regular(q, ring).pullback(hom)
    raise ScenarioError(f"unknown module spec {spec!r}")


def resolve_space(spec, group: FiniteGroup) -> GSimplicialComplex:
    if isinstance(spec, dict):
        simplices = tuple(tuple(s) for s in spec.get("simplices", ()))
        action = tuple(tuple(p) for p in spec.get("action", ()))
        return GSimplicialComplex(group, int(spec.get("n_vertices", 0)),
                                  simplices, action,
                                  label=spec.get("label", ""))
    if not isinstance(spec, str):
        raise ScenarioError(f"cannot build a space from {type(spec).__name__}")
    kind, sep, arg = spec.partition(":")
    if kind == "cross-polytope":
        if not sep:
            raise ScenarioError("cross-polytope needs a dimension")
        sphere = cross_polytope_sphere(int(arg))
        if group != sphere.group:
            raise ScenarioError("cross-polytope models act through the "
                                "order-two group")
        return GSimplicialComplex(group, sphere.n_vertices, sphere.simplices,
                                  sphere.action, label=sphere.label)
    if kind == "three-points-rotation" and not sep:
        perms = tuple(tuple((v + g) % 3 for v in range(3))
                      for g in group.elements())
        return discrete_gset(group, perms, label="three points, rotated")
    raise ScenarioError(f"unknown space spec {spec!r}")


def _bc2_cohomology():
    return (GradedAlgebraPresentation(Fp(2), (("x", 1),)),
            FiniteGroup.cyclic(2))


def _bc3_cohomology():
    # exterior degree-1 class times polynomial degree-2 class; the
    # square of the odd generator is imposed automatically
    return (GradedAlgebraPresentation(Fp(3), (("a", 1), ("b", 2))),
            FiniteGroup.cyclic(3))


PRESENTATIONS = {
    "bc2-cohomology": (_bc2_cohomology,
                       "polynomial algebra on one degree-1 generator over "
                       "F2; the cohomology of the order-two classifying "
                       "space"),
    "bc3-cohomology": (_bc3_cohomology,
                       "exterior degree-1 times polynomial degree-2 over "
                       "F3; the cohomology of the order-three classifying "
                       "space"),
}


def resolve_presentation(name: str):
    """Named algebra presentation plus the group it is validated against."""
    if name not in PRESENTATIONS:
        raise ScenarioError(f"unknown presentation {name!r}")
    return PRESENTATIONS[name][0]()


def resolve_presented_module(spec: str,
                             algebra: GradedAlgebraPresentation
                             ) -> GradedModulePresentation:
    kind, sep, arg = spec.partition(":")
    if kind == "free" and not sep:
        return GradedModulePresentation(algebra, (("m", 0),), (),
                                        label="free rank one")
    if kind == "residue" and not sep:
        rels = []
        for i in range(len(algebra.generators)):
            exps = tuple(1 if j == i else 0
                         for j in range(len(algebra.generators)))
            rels.append((((0, exps), 1),))
        return GradedModulePresentation(algebra, (("m", 0),), tuple(rels),
                                        label="residue field")
    if kind == "truncated":
        if not sep or len(algebra.generators) != 1:
            raise ScenarioError("truncated:n needs a one-generator algebra")
        n = int(arg)
        if n < 0:
            raise ScenarioError("truncation power must be nonnegative")
        rel = (((0, (n + 1,)), 1),)
        return GradedModulePresentation(algebra, (("m", 0),), (rel,),
                                        label=f"truncated at power {n}")
    raise ScenarioError(f"unknown presented-module spec {spec!r}")


def list_builtins() -> dict:
    """Catalog of named inputs; presentations are validated on the spot."""
    groups = [
        {"name": "cyclic:m", "description": "cyclic group of order m"},
        {"name": "product:a,b,...", "description":
            "direct product of group specs"},
        {"name": "symmetric:n", "description":
            "symmetric group on n letters, n <= 5"},
        {"name": "sigma3", "description": "symmetric group on 3 letters"},
        {"name": "klein", "description": "product of two order-2 groups"},
    ]
    rings = [
        {"name": "Z", "description": "the integers"},
        {"name": "Fp:p", "description": "prime field of order p"},
        {"name": "Zmod:m", "description": "integers modulo m"},
    ]
    modules = [
        {"name": "trivial", "description": "rank-1 trivial action"},
        {"name": "trivial:r", "description": "rank-r trivial action"},
        {"name": "regular", "description": "group algebra as a module"},
        {"name": "sign", "description":
            "rank-1 with a cyclic generator acting by -1"},
        {"name": "regular-of-subgroup:m", "description":
            "regular module of the order-m quotient, pulled back"},
    ]
    presentations = []
    for name, (build, description) in sorted(PRESENTATIONS.items()):
        algebra, group = build()
        check = validate_presentation(algebra, group, cap=5)
        presentations.append({"name": name, "description": description,
                              "group": group.label,
                              "validated": check["ok"]})
    models = [
        {"name": "cross-polytope:n", "description":
            "free antipodal n-sphere for the order-two group"},
        {"name": "three-points-rotation", "description":
            "three points rotated through the order-3 quotient"},
    ]
    return {"groups": groups, "rings": rings, "modules": modules,
            "presentations": presentations, "models": models}
