"""Refinement of power-of-two cones into unimodular ones.

Once every multiplicity is a power of two, the generator matrix of any
non-unimodular cone has even determinant, so some nonempty subset of its
generators sums to twice a lattice vector u. Subdividing at u halves the
multiplicity of every affected cone exactly; l rounds of halving per cone
finish a multiplicity of 2**l. The new generators stay short: generation-k
vectors have dilation at most h_k relative to the cone being refined, with
h_k <= (d/2) * (3/2)**(k-1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cone_geometry import (
    LatticeVector,
    SimplicialCone,
    Triangulation,
    half_vector,
)
from .errors import PhaseOrderError
from .p2t_engine import TraceEvent, _Engine, is_power_of_two


@dataclass
class RefineResult:
    """Unimodular refinement plus the bookkeeping the length audit wants.

    cone_generations maps cone uid to its subdivision depth within this
    phase (0 for the cones handed in); vector_generations records each
    subdivision vector with the generation it belongs to.
    """

    triangulation: Triangulation
    trace: list[TraceEvent] = field(default_factory=list)
    cone_generations: dict[int, int] = field(default_factory=dict)
    vector_generations: list[tuple[LatticeVector, int]] = field(default_factory=list)


def refine_to_unimodular(tri: Triangulation) -> Triangulation:
    """Subdivide every power-of-two cone of a tiling down to multiplicity 1.

    Args:
        tri: tiling whose cones all have power-of-two multiplicity.

    Returns:
        A tiling of the same base by unimodular cones.

    Raises:
        PhaseOrderError: if some multiplicity is not a power of two.
    """
    return _refine(tri).triangulation


def refine_with_generations(tri: Triangulation, keep_trace: bool = False) -> RefineResult:
    """Like refine_to_unimodular, but keeps generation bookkeeping."""
    return _refine(tri, keep_trace)


def refine_isolated(cone: SimplicialCone) -> RefineResult:
    """Refine a single power-of-two cone against itself, with fresh labels.

    The cone is rebuilt as its own base (labels -1..-d), so the dilations in
    the result are measured relative to the cone's own basic simplex.
    """
    d = cone.dimension
    labels = tuple(-(i + 1) for i in range(d))
    xi = {-(i + 1): cone.generators[i] for i in range(d)}
    fresh = SimplicialCone(cone.generators, labels, xi, uid=0, det=cone.det)
    return _refine(Triangulation.trivial(fresh))


def _refine(tri: Triangulation, keep_trace: bool = False) -> RefineResult:
    for c in tri.cones:
        if not is_power_of_two(c.multiplicity):
            raise PhaseOrderError(
                f"cone {c.uid} has multiplicity {c.multiplicity}, not a power of two"
            )
    engine = _Engine(
        tri, record_trace=keep_trace, track_created=keep_trace, index_units=False
    )
    generations = {c.uid: 0 for c in tri.cones}
    vectors: list[tuple[LatticeVector, int]] = []
    while engine.pending:
        uid = engine.pending.popleft()
        if uid not in engine.cones:
            continue
        cone = engine.cones[uid]
        if cone.multiplicity == 1:
            continue
        u = half_vector(cone)
        assert u is not None, "even multiplicity must yield a half vector"
        gen = generations[uid] + 1
        vectors.append((u, gen))
        events = engine.subdivide_all(u, 2, cone)
        assert uid not in engine.cones, "the offending cone must get subdivided"
        for ev in events:
            if isinstance(ev, TraceEvent):
                pid, kids, mu_p, mu_kids = (
                    ev.parent_id,
                    ev.children_ids,
                    ev.mu_parent,
                    ev.mu_children,
                )
            else:
                pid, kids, mu_p, mu_kids = ev
            parent_gen = generations.pop(pid, 0)
            for child_uid, mu_child in zip(kids, mu_kids):
                assert 2 * mu_child == mu_p
                generations[child_uid] = parent_gen + 1
    return RefineResult(
        triangulation=engine.triangulation(),
        trace=engine.trace,
        cone_generations=generations,
        vector_generations=vectors,
    )


def hk_bound(d: int, k: int) -> float:
    """Closed-form ceiling (d/2) * (3/2)**(k-1) for the generation bound h_k."""
    if k <= 0:
        return 1.0
    return (d / 2.0) * 1.5 ** (k - 1)


_hk_cache: dict[tuple[int, int], Fraction] = {}


def hk_exact(d: int, k: int) -> Fraction:
    """The recurrence h_k = (h_{k-1} + ... + h_{k-d}) / 2 with h_{<=0} = 1.

    h_1 comes out to d/2; hk_bound dominates hk_exact for every k.
    """
    if k <= 0:
        return Fraction(1)
    key = (d, k)
    if key not in _hk_cache:
        _hk_cache[key] = sum(
            (hk_exact(d, k - i) for i in range(1, d + 1)), Fraction(0)
        ) / 2
    return _hk_cache[key]
