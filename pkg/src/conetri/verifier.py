"""Independent certification of a finished triangulation run.

Everything here recomputes its facts from scratch: tiling checks use exact
rational volume bookkeeping, the audit of the subdivision trace re-derives
potentials from fresh factorizations, and length checks compare exact
dilations against the closed-form ceilings. The engine's own caches are
never trusted.

The tiling certificate is a cross-section volume identity. Cutting the base
cone with the affine hyperplane {dilation == 1} turns each cone D of the
tiling into a simplex of volume proportional to mu(D) divided by the product
of the dilations of D's generators; those volumes must add up to the base
cone's own cross-section, i.e.

    sum_D mu(D) / prod_{g in D} dilation(base, g) == mu(base).

For tilings whose generators all sit at dilation 1 this is plain
multiplicity additivity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cone_geometry import SimplicialCone, Triangulation, contains, dilation
from .errors import PhaseOrderError
from .number_theory import factorize, phi
from .p2t_engine import TraceEvent

PHI_SLACK = 1e-6

# Exponent in the simplified final bound: 5 + (3/2) * log2(3/2).
SIMPLE_EXPONENT = 5.0 + 1.5 * math.log2(1.5)


@dataclass(frozen=True)
class CertificateReport:
    """All certificates for one run, plus the bound values they sit under."""

    volume_ok: bool
    containment_ok: bool
    all_unimodular: bool
    max_dilation: Fraction
    phi_descent_ok: bool
    label_depth_ok: bool
    mu_bound_ok: bool
    xi_length_ok: bool
    final_bound_thm: float
    final_bound_cor: float | None
    final_bound_ok: bool
    slack_ratio: float
    final_count: int


def upper_rational(x: float) -> Fraction:
    """A rational strictly dominating the float x (next representable up).

    Lets exact dilations be compared against float-valued bounds without
    ever rounding the exact side down.
    """
    return Fraction(math.nextafter(x, math.inf))


def _sweep(
    base: SimplicialCone, cones: Sequence[SimplicialCone]
) -> tuple[bool, bool, tuple[bool, ...], Fraction]:
    """One pass over all generators: containment, volume identity, worst
    dilation. Each generator's coordinates are computed exactly once.

    Dilations are cached as reduced integer pairs and the volume terms
    mu / prod(h) are bucketed by denominator, so the pass stays in integer
    arithmetic; the exact fraction sum happens once per distinct product.
    """
    mu_base = base.multiplicity
    sign = 1 if base.det > 0 else -1
    containment_ok = True
    worst_n, worst_d = 0, 1
    dil_cache: dict[tuple[int, ...], tuple[int, int]] = {}
    buckets: dict[int, int] = {}
    for c in cones:
        pn = 1
        pd = 1
        inside = True
        for g in c.generators:
            h = dil_cache.get(g)
            if h is None:
                nums = base.coeff_numerators(g)
                if any(n * sign < 0 for n in nums):
                    containment_ok = False
                    inside = False
                    break
                frac = Fraction(sum(nums), base.det)
                h = (frac.numerator, frac.denominator)
                dil_cache[g] = h
            hn, hd = h
            pn *= hn
            pd *= hd
            if hn * worst_d > worst_n * hd:
                worst_n, worst_d = hn, hd
        if inside:
            # term mu/(pn/pd): numerator mu*pd against denominator pn.
            buckets[pn] = buckets.get(pn, 0) + c.multiplicity * pd
    volume = sum(
        (Fraction(num, den) for den, num in buckets.items()), Fraction(0)
    )
    volume_ok = containment_ok and volume == mu_base
    unimodular_flags = tuple(c.multiplicity == 1 for c in cones)
    return volume_ok, containment_ok, unimodular_flags, Fraction(worst_n, worst_d)


def verify_triangulation(
    base: SimplicialCone, cones: Sequence[SimplicialCone]
) -> tuple[bool, bool, tuple[bool, ...]]:
    """Check tiling certificates for a set of cones against a base.

    Returns:
        (volume_ok, containment_ok, unimodular_flags): the cross-section
        volume identity, generator containment of every cone in the base,
        and a per-cone multiplicity == 1 flag.
    """
    volume_ok, containment_ok, unimodular_flags, _ = _sweep(base, cones)
    return volume_ok, containment_ok, unimodular_flags


def max_dilation(base: SimplicialCone, cones: Sequence[SimplicialCone]) -> Fraction:
    """Largest dilation of any generator of a unimodular tiling.

    Raises:
        PhaseOrderError: if some cone is not unimodular yet.
    """
    for c in cones:
        if c.multiplicity != 1:
            raise PhaseOrderError(
                f"cone {c.uid} still has multiplicity {c.multiplicity}"
            )
    worst = Fraction(0)
    dil_cache: dict[tuple[int, ...], Fraction] = {}
    for c in cones:
        for g in c.generators:
            h = dil_cache.get(g)
            if h is None:
                h = dilation(base, g)
                dil_cache[g] = h
            if h > worst:
                worst = h
    return worst


def intermediate_mu_ceiling(mu: int) -> float:
    """2**(L*(L+3)/2) with L = log2(mu): ceiling for every intermediate
    multiplicity produced while reducing a base of multiplicity mu."""
    ld = math.log2(mu)
    return 2.0 ** (0.5 * ld * (ld + 3.0))


def final_bounds(mu: int, d: int) -> tuple[float, float | None]:
    """Length ceilings for the final generators of a full run.

    Returns:
        (thm, cor): the potential-based bound
        (d^2/4) * mu * 4**phi(mu) * (3/2)**(L*(L+3)/2) and, for mu >= 2,
        the simplified bound (d^2/64) * mu**SIMPLE_EXPONENT * (3/2)**(L^2/2)
        with L = log2(mu). cor is None when mu == 1.

    Raises:
        ValueError: if mu < 1 or d < 2.
    """
    if mu < 1:
        raise ValueError(f"multiplicity must be positive, got {mu}")
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    ld = math.log2(mu)
    phi_mu = phi(factorize(mu))
    thm = (d * d / 4.0) * mu * 4.0**phi_mu * 1.5 ** (0.5 * ld * (ld + 3.0))
    if mu == 1:
        return thm, None
    cor = (d * d / 64.0) * mu**SIMPLE_EXPONENT * 1.5 ** (0.5 * ld * ld)
    return thm, cor


def audit_trace(
    base: SimplicialCone,
    trace: Iterable[TraceEvent],
    all_created: Sequence[SimplicialCone],
) -> tuple[bool, bool, bool, bool]:
    """Re-audit the recorded trail of a power-of-two phase.

    Checks, with fresh factorizations and exact dilations:
      * phi descent: each child multiplicity has potential at most the
        parent's minus 1 (up to PHI_SLACK);
      * label depth: every cone's largest label index stays below the base
        potential;
      * multiplicity ceiling: every created cone obeys intermediate_mu_ceiling;
      * label length: every nonnegative label s carried by any created cone
        has dilation at most (d/2) * mu(base) * 4**s, compared exactly.
        all_created must be the full creation history for the coverage
        argument (newest label per cone) to be exhaustive.

    Returns:
        (phi_descent_ok, label_depth_ok, mu_bound_ok, xi_length_ok).
    """
    phi_base = phi(factorize(base.multiplicity))
    d = base.dimension
    mu_base = base.multiplicity

    phi_descent_ok = True
    for ev in trace:
        phi_parent = phi(factorize(ev.mu_parent))
        for mu_child in ev.mu_children:
            if phi(factorize(mu_child)) > phi_parent - 1.0 + PHI_SLACK:
                phi_descent_ok = False

    label_depth_ok = True
    mu_bound_ok = True
    xi_length_ok = True
    ld_base = math.log2(mu_base)
    log_ceiling = 0.5 * ld_base * (ld_base + 3.0)
    # Every nonnegative label enters existence on the cones of one event,
    # where it is their largest label; it never changes vector afterwards.
    # Auditing each created cone's newest label therefore covers every
    # (label, vector) pair carried by any created cone.
    dil_cache: dict[tuple[LatticeVector, int], bool] = {}
    half_d_mu = Fraction(d * mu_base, 2)
    for cone in all_created:
        s = cone.max_label()
        if s > phi_base - 1.0 + PHI_SLACK:
            label_depth_ok = False
        if math.log2(cone.multiplicity) > log_ceiling + PHI_SLACK:
            mu_bound_ok = False
        if s < 0:
            continue
        vec = cone.xi[s]
        key = (vec, s)
        ok = dil_cache.get(key)
        if ok is None:
            # Exact comparison: (d/2) * mu * 4**s is rational.
            ok = dilation(base, vec) <= half_d_mu * 4**s
            dil_cache[key] = ok
        if not ok:
            xi_length_ok = False
    return phi_descent_ok, label_depth_ok, mu_bound_ok, xi_length_ok


def certify(
    base: SimplicialCone,
    final: Triangulation,
    trace: Iterable[TraceEvent] = (),
    p2t_created: Sequence[SimplicialCone] = (),
) -> CertificateReport:
    """Assemble the full certificate report for a finished run.

    Args:
        base: the original cone.
        final: the unimodular tiling produced by both phases.
        trace: subdivision events of the power-of-two phase.
        p2t_created: every cone created during the power-of-two phase
            (the audit set for the multiplicity and label certificates).

    Returns:
        CertificateReport; final_bound_ok means the observed max dilation
        sits under the theorem bound and, when defined, the simplified one.
    """
    volume_ok, containment_ok, unimodular_flags, worst = _sweep(
        base, final.cones
    )
    all_unimodular = all(unimodular_flags)
    if not all_unimodular:
        worst = Fraction(0)
    thm, cor = final_bounds(base.multiplicity, base.dimension)
    audit_set = p2t_created if p2t_created else [base]
    phi_ok, depth_ok, mu_ok, xi_ok = audit_trace(base, trace, audit_set)
    bound_ok = all_unimodular and worst <= upper_rational(thm)
    if cor is not None:
        bound_ok = bound_ok and worst <= upper_rational(cor)
    reference = cor if cor is not None else thm
    slack = reference / float(worst) if worst > 0 else math.inf
    return CertificateReport(
        volume_ok=volume_ok,
        containment_ok=containment_ok,
        all_unimodular=all_unimodular,
        max_dilation=worst,
        phi_descent_ok=phi_ok,
        label_depth_ok=depth_ok,
        mu_bound_ok=mu_ok,
        xi_length_ok=xi_ok,
        final_bound_thm=thm,
        final_bound_cor=cor,
        final_bound_ok=bound_ok,
        slack_ratio=slack,
        final_count=len(final.cones),
    )
