"""
Triangulating a 2D cone step by step
====================================

The cone spanned by (1,0) and (1,n) has multiplicity n, and its unique
unimodular triangulation is the staircase of cones ((1,k),(1,k+1)). Small
enough to print every intermediate state, big enough to show both phases
doing real work.
"""

import argparse

from conetri import make_cone, run_p2t
from conetri.pow2_refiner import refine_with_generations
from conetri.verifier import certify


def show(tag, cones):
    parts = ", ".join(
        f"{c.generators} mu={c.multiplicity}" for c in sorted(cones, key=lambda c: c.uid)
    )
    print(f"{tag}: {parts}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    ap.add_argument("-n", type=int, default=12, help="multiplicity of the base cone")
    n = ap.parse_args().n

    base = make_cone([(1, 0), (1, n)])
    print(f"base cone: {base.generators}, multiplicity {base.multiplicity}")
    print()

    # Phase one drives every multiplicity to a power of two. Each event
    # subdivides one cone at a lattice point x' chosen so the child
    # multiplicities lose an odd prime factor.
    state = run_p2t(base)
    print(f"phase 1: {len(state.trace)} subdivision events")
    for ev in state.trace:
        print(
            f"  split cone {ev.parent_id} (mu={ev.mu_parent}) at x'={ev.x_prime}"
            f" using p={ev.p}: children mu={list(ev.mu_children)}"
        )
    show("phase 1 result", state.triangulation.cones)
    print()

    # Phase two halves the remaining powers of two. Every subdivision point
    # is half the sum of some generators, so each split is an exact halving.
    result = refine_with_generations(state.triangulation)
    print(f"phase 2: {len(result.vector_generations)} halving points")
    for u, gen in result.vector_generations:
        print(f"  generation {gen}: subdivide at u={u}")
    show("final tiling", result.triangulation.cones)
    print()

    # The certificate re-checks everything from scratch: exact volume
    # additivity, containment, unimodularity, and the length bounds.
    report = certify(
        base,
        result.triangulation,
        state.trace,
        state.triangulation.all_created,
    )
    print(f"certified: volume={report.volume_ok} containment={report.containment_ok}")
    print(f"max dilation {report.max_dilation} vs bound {report.final_bound_cor:.1f}")
    expected = sorted(tuple(sorted(((1, k), (1, k + 1)))) for k in range(n))
    got = sorted(tuple(sorted(c.generators)) for c in result.triangulation.cones)
    print(f"matches the staircase: {got == expected}")


if __name__ == "__main__":
    main()
