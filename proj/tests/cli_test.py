"""End-to-end checks of the region-carver binary: exit codes, schema validity,
determinism and the generators feeding back into `regions`."""

import json
import os
import subprocess
import sys
import tempfile

import jsonschema

BIN, SCHEMA = sys.argv[1], sys.argv[2]
failures = []


def run(*args, env=None):
    return subprocess.run([BIN, *args], capture_output=True, text=True, env=env, timeout=600)


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


with open(SCHEMA) as f:
    schema = json.load(f)
validator = jsonschema.Draft202012Validator(schema)

with tempfile.TemporaryDirectory() as tmp:
    path = lambda name: os.path.join(tmp, name)

    r = run("regions", "--example", "hyperboloid", "--bounded-check", "--projective", "-o", path("h.json"))
    check(r.returncode == 0, "regions on a built-in example exits 0")
    doc = json.load(open(path("h.json")))
    errors = list(validator.iter_errors(doc))
    check(not errors, "hyperboloid result matches the schema" + (f": {errors[0].message}" if errors else ""))
    check(len(doc["regions"]) == 12, "hyperboloid has 12 regions")
    check(all(reg["boundedness"] != "unknown" for reg in doc["regions"]), "every region got a boundedness label")
    check("projective" in doc and doc["delta"] == 1e-5, "projective and delta are recorded")

    r = run("regions", "--example", "discriminant8", "-o", path("d.json"))
    check(r.returncode == 0 and not list(validator.iter_errors(json.load(open(path("d.json"))))),
          "discriminant result matches the schema")
    r = run("membership", path("d.json"), "--", "-1,5")
    m = json.loads(r.stdout) if r.returncode == 0 else {}
    check(m.get("sigma") == "+-++" and m.get("chi") == -1, "membership of (-1,5) from a stored result")
    check(run("membership", path("d.json"), "0,0").returncode == 4, "membership on a hypersurface exits 4")
    check(run("membership", path("d.json"), "0.5").returncode == 1, "membership with the wrong dimension exits 1")
    check(run("membership", path("missing.json"), "1,2").returncode == 3, "missing result file exits 3")

    a = run("regions", "--example", "discriminant8", "--seed", "5")
    b = run("regions", "--example", "discriminant8", env={**os.environ, "REGION_CARVER_SEED": "5"})
    strip = lambda s: {k: v for k, v in json.loads(s).items() if k != "timing"}
    check(a.returncode == 0 and strip(a.stdout) == strip(b.stdout), "seed flag and environment seed agree")

    r = run("gen-random", "-n", "2", "-k", "3", "-d", "1", "--seed", "4", "-o", path("lines.txt"))
    check(r.returncode == 0, "gen-random writes an input file")
    r = run("regions", path("lines.txt"))
    check(r.returncode == 0 and len(json.loads(r.stdout)["regions"]) == 7, "three generic lines give 7 regions")

    r = run("gen-spectrahedron", "--elliptope", "-o", path("ell.txt"))
    check(r.returncode == 0 and "2*x*y*z" in open(path("ell.txt")).read(), "gen-spectrahedron emits the elliptope")
    r = run("gen-spectrahedron", "-n", "2", "-m", "2", "--seed", "3")
    check(r.returncode == 0 and len([l for l in r.stdout.splitlines() if l and not l.startswith(("#", "vars:"))]) == 3,
          "a 2x2 pencil has 3 principal minors")

    r = run("bench", "--random", "2,2,2", "--spectrahedron", "2,2", "-N", "2")
    lines = r.stdout.strip().splitlines()
    check(r.returncode == 0 and len(lines) == 3 and lines[0].startswith("kind,n,k,d,m,N,ml_bound"),
          "bench prints a header and one row per family")
    check(all(l.endswith(",true") for l in lines[1:]), "bench rows respect the ML bound")

    with open(path("bad.txt"), "w") as f:
        f.write("vars: x y\nx^2 + * y\n")
    r = run("regions", path("bad.txt"))
    check(r.returncode == 1 and "offset 16" in r.stderr, "parse errors exit 1 and report the offset")
    check(run("regions").returncode == 1, "missing input exits 1")
    check(run("regions", "--example", "ellipsoids", "--t", "2").returncode == 1, "inadmissible t exits 1")
    check(run("regions", path("nope.txt")).returncode == 3, "unreadable input exits 3")
    check(run("regions", "--example", "hyperboloid", "-o", "/nonexistent/dir/out.json").returncode == 3,
          "unwritable output exits 3")
    check(run("frobnicate").returncode == 1, "unknown subcommand exits 1")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
