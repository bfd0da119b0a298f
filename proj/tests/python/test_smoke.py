"""Smoke tests for the python module against the shipped fixtures."""
import os
import sys

import symrep

FIXTURES = sys.argv[1] if len(sys.argv) > 1 else "fixtures"

checks = 0


def ok(cond, what):
    global checks
    assert cond, what
    checks += 1


def read(name):
    with open(os.path.join(FIXTURES, name), encoding="utf-8") as fh:
        return fh.read()


def main():
    m = symrep.structure_from_json(read("mutex2.kripke.json"))
    ok(m.num_states == 9, "mutex structure should have 9 states")
    ok(len(m.transitions) == 18, "mutex structure should have 18 transitions")

    safety = symrep.parse_formula("AG !(c1 & c2)")
    ok(str(safety) == "A[false R !(c1 & c2)]", "AG should desugar to a release form")
    ok(not symrep.models(m, safety), "the broken mutex should violate safety")
    sat = symrep.check(m, safety)
    ok(sat["CC"] is False, "safety cannot hold at the double critical section")

    gens = read("mutex2_swap.group.json")
    ok(symrep.is_invariant(m, gens, safety), "the safety formula is symmetric")
    ok(not symrep.is_invariant(m, gens, symrep.parse_formula("AG !c1")),
       "a one-sided formula is not symmetric")

    orbs = symrep.orbits(m, gens)
    ok(sorted(len(o) for o in orbs) == [1, 1, 1, 2, 2, 2],
       "the swap should pair six states and fix three")

    q = symrep.quotient(m, gens)
    ok(q["quotient"].num_states == 6, "the quotient should collapse to 6 states")
    ok(q["theta"]["NC"] == "CN", "NC should map to its representative CN")
    ok(q["theta"]["CN"] == "CN", "representatives are fixed points")

    rep = symrep.repair_symmetric(m, gens, safety)
    ok(rep is not None, "a symmetric repair exists")
    lifted = rep["lifted"]
    ok(lifted.num_states == 8, "the lift should keep 8 states")
    ok("CC" not in lifted.names, "the lift should drop the double critical section")
    ok(symrep.models(lifted, safety), "the lifted repair satisfies safety")

    direct = symrep.repair(m, safety)
    ok(direct is not None and symrep.models(direct, safety), "plain repair works too")
    ok(symrep.repair(m, symrep.parse_formula("false")) is None, "false is unrepairable")

    prog = symrep.make_nc_mutex(3)
    ok(symrep.reduced_structure(prog).num_states == 4, "reduced 3-mutex has 4 states")
    ok(symrep.global_structure(prog).num_states == 8, "global 3-mutex has 8 states")
    pairwise = symrep.parse_formula("AG (!(c1 & c2) & !(c1 & c3) & !(c2 & c3))")
    fixed = symrep.repair_program(prog, pairwise)
    ok(fixed is not None, "the 3-mutex is repairable")
    ok("action N -> C when !c2 & !c3" in str(fixed),
       "process 1 should wait for the others to leave the critical section")

    lock = symrep.parse_program(read("lock2.prog"))
    ok(symrep.models(symrep.global_structure(lock), symrep.parse_formula("AG !(c1 & c2)")),
       "the lock-based program is already safe")

    ok(m.to_dot().startswith("digraph kripke {"), "dot export")
    ok(symrep.structure_from_json(m.to_json()).to_json() == m.to_json(),
       "JSON round trip is stable")

    print("python smoke: {} checks passed".format(checks))


if __name__ == "__main__":
    main()
