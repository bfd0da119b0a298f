#!/usr/bin/env python3
"""End-to-end exercises for the command line tool.

Usage: run_cli_tests.py <symrep-binary> <fixtures-dir> <mini-solver.py>

Covers the exit-code contract (0 ok, 1 violation, 2 no repair, >2 usage or
internal), artifact determinism, and every subcommand against the fixtures.
"""
import json
import os
import subprocess
import sys
import tempfile

BIN = sys.argv[1]
FIXTURES = sys.argv[2]
MINI_SOLVER = sys.argv[3]

failures = []
passes = 0


def fx(name):
    return os.path.join(FIXTURES, name)


def run(args, timeout=180):
    return subprocess.run([BIN] + args, capture_output=True, text=True, timeout=timeout)


def expect(name, cond, detail=""):
    global passes
    if cond:
        passes += 1
    else:
        failures.append(name)
        print("FAIL {}: {}".format(name, detail), file=sys.stderr)


def main():
    tmp = tempfile.mkdtemp(prefix="symrep-cli-")

    # --- check ------------------------------------------------------------
    r = run(["check", fx("mutex2.kripke.json"), "-f", "EF (c1 & c2)"])
    expect("check holds exit 0", r.returncode == 0, r.stderr)
    expect("check holds stdout", r.stdout.startswith("holds"), r.stdout)

    r = run(["check", fx("mutex2.kripke.json"), "--formula-file", fx("mutex2_safety.ctl")])
    expect("check violation exit 1", r.returncode == 1, str(r.returncode))
    expect("check violation names the state", "fails at initial state" in r.stdout, r.stdout)

    satset_path = os.path.join(tmp, "satset.json")
    r = run(["check", fx("mutex2.kripke.json"), "-f", "EX (t1 | t2)",
             "--satset-out", satset_path])
    expect("check satset exit 0", r.returncode == 0, r.stderr)
    with open(satset_path, encoding="utf-8") as fh:
        satset = json.load(fh)
    expect("satset has formula and holds", "formula" in satset and "holds" in satset,
           json.dumps(satset)[:200])
    expect("satset covers every state", len(satset["holds"]) == 9, str(len(satset["holds"])))

    r = run(["check", fx("box.kripke.json"), "-f", "p & "])
    expect("parse error exit 65", r.returncode == 65, str(r.returncode))
    expect("parse error position", "position 4" in r.stderr, r.stderr)

    r = run(["--json-errors", "check", fx("box.kripke.json"), "-f", "p & "])
    expect("json parse error exit 65", r.returncode == 65, str(r.returncode))
    err = json.loads(r.stdout)
    expect("json parse error shape", err.get("error") == "formula" and err.get("position") == 4,
           r.stdout)

    r = run(["check", fx("box.kripke.json")])
    expect("missing formula exit 65", r.returncode == 65, str(r.returncode))
    expect("missing formula message", "exactly one of" in r.stderr, r.stderr)

    r = run(["check", fx("box.kripke.json"), "-f", "p"])
    expect("unknown proposition exit 65", r.returncode == 65, str(r.returncode))
    expect("unknown proposition message", "unknown proposition" in r.stderr, r.stderr)

    r = run(["check", os.path.join(tmp, "missing.json"), "-f", "true"])
    expect("missing file exit > 2", r.returncode > 2, str(r.returncode))

    r = run([])
    expect("no subcommand exit > 2", r.returncode > 2, str(r.returncode))

    # --- quotient ----------------------------------------------------------
    r = run(["quotient", fx("box.kripke.json"), "--group", fx("box_swap.group.json")])
    expect("quotient exit 0", r.returncode == 0, r.stderr)
    q = json.loads(r.stdout)
    expect("quotient states", q["states"] == ["s1", "t1"], r.stdout)
    expect("quotient transitions", q["transitions"] == [["s1", "t1"], ["t1", "s1"]], r.stdout)
    r2 = run(["quotient", fx("box.kripke.json"), "--group", fx("box_swap.group.json")])
    expect("quotient deterministic", r.stdout == r2.stdout, "outputs differ between runs")

    qfile = os.path.join(tmp, "quotient.json")
    theta_file = os.path.join(tmp, "theta.json")
    r = run(["quotient", fx("box.kripke.json"), "--group", fx("box_swap.group.json"),
             "-o", qfile, "--theta-out", theta_file])
    expect("quotient -o exit 0", r.returncode == 0, r.stderr)
    with open(qfile, encoding="utf-8") as fh:
        expect("quotient file matches stdout", fh.read() == r2.stdout, "file and stdout differ")
    with open(theta_file, encoding="utf-8") as fh:
        theta = json.load(fh)
    expect("theta maps onto representatives",
           theta == {"s1": "s1", "s2": "s1", "t1": "t1", "t2": "t1"}, json.dumps(theta))

    r = run(["quotient", fx("mutex2.kripke.json"), "--group", fx("mutex2_swap.group.json")])
    expect("mutex quotient exit 0", r.returncode == 0, r.stderr)
    expect("mutex quotient has 6 states", len(json.loads(r.stdout)["states"]) == 6, r.stdout)

    # --- repair ------------------------------------------------------------
    r = run(["repair", fx("mutex2.kripke.json"), "--formula-file", fx("mutex2_safety.ctl")])
    expect("plain repair exit 0", r.returncode == 0, r.stderr)
    r2 = run(["repair", fx("mutex2.kripke.json"), "--formula-file", fx("mutex2_safety.ctl")])
    expect("plain repair deterministic", r.stdout == r2.stdout, "outputs differ between runs")

    keep_dir = os.path.join(tmp, "intermediates")
    lifted_file = os.path.join(tmp, "lifted.json")
    r = run(["repair", fx("mutex2.kripke.json"), "--formula-file", fx("mutex2_safety.ctl"),
             "--group", fx("mutex2_swap.group.json"), "-o", lifted_file,
             "--theta-out", os.path.join(tmp, "mutex-theta.json"),
             "--keep-intermediates", keep_dir])
    expect("symmetric repair exit 0", r.returncode == 0, r.stderr)
    with open(lifted_file, encoding="utf-8") as fh:
        lifted = json.load(fh)
    expect("lifted repair keeps 8 states", len(lifted["states"]) == 8, json.dumps(lifted))
    expect("lifted repair drops CC", "CC" not in lifted["states"], json.dumps(lifted))
    for artifact in ("quotient.json", "theta.json", "quotient-repair.json"):
        expect("intermediate " + artifact, os.path.exists(os.path.join(keep_dir, artifact)),
               "missing " + artifact)

    r = run(["repair", fx("box.kripke.json"), "-f", "false"])
    expect("unrepairable exit 2", r.returncode == 2, str(r.returncode))
    expect("unrepairable message", "no repair exists" in r.stderr, r.stderr)

    r = run(["repair", fx("mutex2.kripke.json"), "-f", "c1 & c2", "--no-require-initial"])
    expect("no-require-initial exit 0", r.returncode == 0,
           "{} {}".format(r.returncode, r.stderr))

    cnf_path = os.path.join(tmp, "encoding.cnf")
    r = run(["repair", fx("mutex2.kripke.json"), "--formula-file", fx("mutex2_safety.ctl"),
             "--emit-cnf", cnf_path, "-o", os.path.join(tmp, "ignored.json")])
    expect("emit-cnf exit 0", r.returncode == 0, r.stderr)
    with open(cnf_path, encoding="utf-8") as fh:
        cnf = fh.read()
    expect("cnf names variables", cnf.startswith("c var "), cnf[:40])
    expect("cnf has a problem line", "\np cnf " in cnf, cnf[:200])

    solver_cmd = "{} {}".format(sys.executable, MINI_SOLVER)
    r = run(["repair", fx("mutex2.kripke.json"), "--formula-file", fx("mutex2_safety.ctl"),
             "--use-external-solver", solver_cmd])
    expect("external solver exit 0", r.returncode == 0, r.stderr)
    ext = json.loads(r.stdout)
    expect("external solver output is a structure", "states" in ext and "transitions" in ext,
           r.stdout[:200])

    # --- repair-program ----------------------------------------------------
    prog_file = os.path.join(tmp, "repaired.prog")
    rp_dir = os.path.join(tmp, "rp-intermediates")
    rp_args = ["repair-program", fx("mutex3_nc.prog"),
               "--formula-file", fx("mutex3_safety.ctl"),
               "--simplify-guards", "--keep-intermediates", rp_dir]
    r = run(rp_args + ["-o", prog_file])
    expect("repair-program exit 0", r.returncode == 0, r.stderr)
    with open(prog_file, encoding="utf-8") as fh:
        prog = fh.read()
    for line in ("action N -> C when !c2 & !c3",
                 "action N -> C when !c1 & !c3",
                 "action N -> C when !c1 & !c2"):
        expect("repaired guard '{}'".format(line), line in prog, prog)
    for artifact in ("reduced.json", "repaired.json", "extracted-raw.prog"):
        expect("rp intermediate " + artifact, os.path.exists(os.path.join(rp_dir, artifact)),
               "missing " + artifact)
    r2 = run(rp_args)
    expect("repair-program deterministic", r2.returncode == 0 and r2.stdout == prog,
           "stdout differs from the file artifact")

    # the three-stage mutex needs the full closure: the minimal one leaves the
    # trying tier dead and verification rejects the extraction
    r = run(["repair-program", fx("mutex3.prog"), "--formula-file", fx("mutex3_safety.ctl"),
             "--simplify-guards"])
    expect("repair-program three-stage minimal close rejected", r.returncode == 70,
           str(r.returncode))
    expect("three-stage rejection names verification",
           "failed verification" in r.stderr, r.stderr)
    r = run(["repair-program", fx("mutex3.prog"), "--formula-file", fx("mutex3_safety.ctl"),
             "--simplify-guards", "--close", "full"])
    expect("repair-program three-stage full close exit 0", r.returncode == 0, r.stderr)
    expect("three-stage output is a program", r.stdout.startswith("process 1"), r.stdout[:40])
    r2 = run(["repair-program", fx("mutex3.prog"), "--formula-file", fx("mutex3_safety.ctl"),
              "--simplify-guards", "--close", "full"])
    expect("repair-program three-stage deterministic", r.stdout == r2.stdout,
           "outputs differ between runs")

    r = run(["repair-program", fx("mutex2.prog"), "-f", "false"])
    expect("repair-program unrepairable exit 2", r.returncode == 2, str(r.returncode))

    r = run(["repair-program", fx("mutex3_nc.prog"), "--formula-file", fx("mutex3_safety.ctl"),
             "--close", "none"])
    expect("close none fails loudly", r.returncode > 2, str(r.returncode))

    # --- extract -----------------------------------------------------------
    extracted_file = os.path.join(tmp, "extracted.prog")
    r = run(["extract", fx("mutex3_nc.prog"),
             "--repaired", os.path.join(rp_dir, "repaired.json"),
             "--simplify-guards", "--formula-file", fx("mutex3_safety.ctl"),
             "-o", extracted_file])
    expect("extract exit 0", r.returncode == 0, r.stderr)
    with open(extracted_file, encoding="utf-8") as fh:
        expect("extract matches repair-program", fh.read() == prog,
               "pipelines produced different programs")

    # --- lattice -----------------------------------------------------------
    r = run(["lattice", fx("box.kripke.json"), "--group", fx("box_swap.group.json")])
    expect("lattice exit 0", r.returncode == 0, r.stderr)
    expect("lattice counts 10 closed elements", r.stdout.startswith("10 G-closed"), r.stdout)

    r = run(["lattice", fx("box.kripke.json"), "--list"])
    expect("lattice list exit 0", r.returncode == 0, r.stderr)
    count = int(r.stdout.split()[0])
    listed = len(r.stdout.strip().splitlines()) - 1
    expect("lattice list prints every element", listed == count,
           "{} listed, {} counted".format(listed, count))

    # --- oracle-compare ----------------------------------------------------
    r = run(["oracle-compare", fx("mutex2.kripke.json"),
             "--formula-file", fx("mutex2_safety.ctl")])
    expect("oracle-compare exit 0", r.returncode == 0, r.stderr)
    expect("oracle-compare agrees", r.stdout.strip().endswith("AGREE"), r.stdout)

    # --- dot ---------------------------------------------------------------
    r = run(["dot", fx("box.kripke.json")])
    expect("dot exit 0", r.returncode == 0, r.stderr)
    expect("dot digraph", r.stdout.startswith("digraph kripke {"), r.stdout[:40])
    expect("dot edge", '"s1" -> "t1"' in r.stdout, r.stdout)
    expect("dot initial ring", "doublecircle" in r.stdout, r.stdout)

    r = run(["dot", fx("mutex2.kripke.json"), "--overlay", lifted_file])
    expect("dot overlay exit 0", r.returncode == 0, r.stderr)
    expect("dot overlay dashes the cut", "style=dashed" in r.stdout, r.stdout)

    r = run(["dot", "--program", fx("mutex2.prog"), "--reduced"])
    expect("dot program exit 0", r.returncode == 0, r.stderr)
    expect("dot program has move labels", "label=" in r.stdout, r.stdout)

    print("cli tests: {} passed, {} failed".format(passes, len(failures)))
    if failures:
        print("failed: " + ", ".join(failures))
    return len(failures)


if __name__ == "__main__":
    sys.exit(main())
