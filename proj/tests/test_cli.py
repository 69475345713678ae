"""End-to-end checks of the bergerkit command line: exit codes, reports, reproducibility."""

import json
import os
import subprocess
import sys
import tempfile

BIN = sys.argv[1]
failures = []


def run(*args, env=None):
    e = dict(os.environ)
    if env:
        e.update(env)
    p = subprocess.run([BIN, *args], capture_output=True, text=True, env=e)
    return p.returncode, p.stdout, p.stderr


def report(*args, env=None):
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "r.json")
        code, out, err = run("--json", path, *args, env=env)
        with open(path) as f:
            return code, json.load(f)


def expect(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


code, r = report("analyze", "--catalog", "so:3")
p = r["payload"]["report"]
expect(code == 0 and p["is_berger"] and p["is_einstein_berger"], "analyze so:3 is Einstein-Berger")
expect(r["command"] == "analyze" and r["version"] and len(r["input_digest"]) == 16, "run report fields")

code, r = report("analyze", "--catalog", "sl:2:R@so(2,2)")
expect(code == 0 and r["payload"]["report"]["R1_nonempty"] is False, "sl(2,R) in so(2,2) has empty R1")

code, out, err = run("analyze", "--file", "not_closed")
expect(code == 2 and "outside the span" in err, "non-closed basis is an input error")

code, r = report("analyze", "--file", "lorentz_sim2")
expect(code == 0 and r["payload"]["candidate"]["weakly_irreducible"] == "true", "structured spec file analyzes")

code, out, err = run("analyze")
expect(code == 2, "analyze without a source is a usage error")

code, r = report("enumerate", "--signature", "2,0")
fams = sorted(i["family"] for i in r["payload"]["instances"])
expect(code == 0 and fams == [6, 7], "enumerate n = 0 gives families 6 and 7")

code, r = report("enumerate", "--signature", "2,2", "--holonomy", "so:2")
counts = r["payload"]["counts"]
expect(code == 0 and counts == {"1": 2, "2": 1, "3": 3, "4": 3, "5": 2}, "enumerate n = 2, so(2) counts")
expect(all(i["passes"] for i in r["payload"]["instances"]), "every n = 2 instance validates")

code, out, err = run("enumerate", "--signature", "2,-1")
expect(code == 2, "negative n is a usage error")
code, out, err = run("enumerate", "--signature", "2,3", "--holonomy", "so:2")
expect(code == 2, "factor dimensions must add up to n")
code, out, err = run("enumerate", "--bogus")
expect(code == 2, "unknown flag is a usage error")

code, r = report("metric", "verify", "--file", "example1")
expect(code == 0 and r["payload"]["einstein"]["pass"], "example 1 chart is Einstein")
code, r = report("metric", "holonomy", "--file", "example1")
expect(code == 0 and r["payload"]["holonomy"]["dimension"] == 4, "example 1 holonomy dimension 4")
code, r = report("metric", "holonomy", "--file", "example1_control")
expect(code == 0 and r["payload"]["holonomy"]["dimension"] == 2, "control chart holonomy dimension 2")
code, r = report("metric", "holonomy", "--file", "flat4")
expect(code == 0 and r["payload"]["holonomy"]["dimension"] == 0, "flat chart holonomy dimension 0")
code, r = report("metric", "verify", "--file", "example1_nonharmonic")
expect(code == 1 and not r["payload"]["einstein"]["pass"], "non-harmonic H0 fails the Einstein check")
code, out, err = run("metric", "verify", "--file", "example1", "--lambda", "2")
expect(code == 1, "wrong lambda fails")
code, out, err = run("metric", "holonomy", "--file", "example1", "--expect", "3")
expect(code == 1 and "EXPECTED" in out, "unexpected holonomy dimension fails")
code, out, err = run("metric", "verify", "--file", "no_such_chart")
expect(code == 2, "missing chart is an input error")
for fam, dim in (("family4", 5), ("family5", 6)):
    code, r = report("metric", "holonomy", "--file", fam)
    expect(code == 0 and r["payload"]["holonomy"]["dimension"] == dim, f"{fam} holonomy dimension {dim}")

a = report("metric", "holonomy", "--file", "example1", "--seed", "5", env={"BERGERKIT_THREADS": "1"})[1]
b = report("metric", "holonomy", "--file", "example1", "--seed", "5", env={"BERGERKIT_THREADS": "3"})[1]
expect(a["payload"] == b["payload"] and a["input_digest"] == b["input_digest"], "seeded runs are reproducible")
a = report("metric", "verify", "--file", "example1", "--seed", "9")[1]
b = report("metric", "verify", "--file", "example1", "--seed", "9")[1]
expect(a["payload"] == b["payload"], "seeded verify is reproducible")

code, r = report("catalog", "list")
expect(code == 0 and len(r["payload"]["families"]) >= 12, "catalog lists at least 12 families")
code, r = report("catalog", "describe", "so:2,3")
expect(code == 0 and r["payload"]["dim_formula"] and r["payload"]["instance"]["dim"] == 10, "describe so:2,3")
code, out, err = run("catalog", "describe", "nope:1")
expect(code == 2, "unknown catalog id is an input error")

sys.exit(1 if failures else 0)
