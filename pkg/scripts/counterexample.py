"""Walk the A3 chain that leaves the class of parapolytopes and print what happens.

Prints the operator trace, the step-4 polytope and the fiber that is not a box.
"""

from nzpolytope.demazure import demazure_chain
from nzpolytope.oracles import counterexample_scenario
from nzpolytope.polytope import hull_equals


def fmt(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def main() -> None:
    sc = counterexample_scenario()
    print(f"word {sc.word}, start {fmt(sc.a_low)}, lattice step {sc.step}")
    chain = demazure_chain(sc.datum, sc.word, start=sc.a_low, step=sc.step, check_all_colors=False)
    for r in chain.trace:
        print(f"  D^({r.k}) color {r.color}: {r.fibers_processed} fibers, min expansion {r.min_L}, {r.num_points} points out")
    print(f"result: {chain.kind}, failed at step {chain.failed_step}")

    P4 = chain.intermediate_polytope(4)
    print(f"after 4 steps: dim {P4.dim}, {len(P4.vertices)} vertices, matches listed H-rep: {P4 == sc.step4_polytope()}")

    wit = chain.witness_unscaled()
    c = sc.witness_complement
    fiber = sc.fiber_polytope()
    print(f"bad fiber over {fmt(c)} along color {sc.failing_color}:")
    for v in sorted(fiber.vertices):
        print(f"  vertex {fmt(v)}")
    print(f"lattice points equal the listed triangle: {hull_equals(set(wit[c]), fiber)}")


if __name__ == "__main__":
    main()
