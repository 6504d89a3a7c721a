"""End-to-end checks of the command-line tool. Usage: test_cli.py <zzvine binary>"""

import os
import re
import subprocess
import sys
import tempfile

BIN = sys.argv[1]
TMP = tempfile.mkdtemp(prefix="zzvine_cli_")
FAILURES = []


def run(*args, ok=True):
    p = subprocess.run([BIN, *args], capture_output=True, text=True)
    if ok and p.returncode != 0:
        raise AssertionError(f"{args} exited {p.returncode}: {p.stderr}")
    return p


def write(name, text):
    path = os.path.join(TMP, name)
    with open(path, "w") as f:
        f.write(text)
    return path


def check(name, cond):
    print(("ok   " if cond else "FAIL ") + name)
    if not cond:
        FAILURES.append(name)


def final_barcode(out):
    return out.split("final\n", 1)[1]


TRI = write("tri.txt", "i 0\ni 1\ni 0 1\nd 0 1\nd 1\nd 0\n")

# barcode
check("empty file gives empty barcode", run("barcode", write("empty.txt", "")).stdout == "")
check("small filtration has three bars", run("barcode", TRI).stdout == "0 1 5\n0 2 2\n0 4 4\n")
p = run("barcode", write("bad.txt", "i 0\nq 1\n"), ok=False)
check("malformed line exits 2", p.returncode == 2)
check("malformed line reports its line", "line 2" in p.stderr)
p = run("barcode", write("invalid.txt", "i 0 1\n"), ok=False)
check("invalid filtration exits 2", p.returncode == 2)

# update
f1 = write("f1.txt", run("--seed", "1", "gen-filtration").stdout)
f2 = write("f2.txt", run("--seed", "2", "gen-filtration").stdout)
script = write("t.txt", run("transform", f1, f2).stdout)
out = run("update", f1, script, "--engine", "rep", "--check").stdout
check("transform script reaches the target barcode", final_barcode(out) == run("barcode", f2).stdout)
check("per-op lines are printed", out.count("\nop ") + out.startswith("op ") == len(open(script).read().splitlines()))

p = run("update", TRI, write("oe.txt", "oe 4 0\n"), "--engine", "fzz", ok=False)
check("fzz engine rejects outward expansion with exit 3", p.returncode == 3)
p = run("update", TRI, write("illegal.txt", "fs 2\n"), ok=False)
check("illegal op exits 2", p.returncode == 2)

agree = None
for seed in range(200):
    text = run("--seed", str(seed), "gen-script", f1, "-k", "8").stdout
    if re.search(r"^o[ec] ", text, re.M):
        continue
    s = write("s.txt", text)
    rep = run("update", f1, s, "--engine", "rep").stdout
    fzz = run("update", f1, s, "--engine", "fzz").stdout
    both = run("update", f1, s, "--engine", "both", "--check")
    agree = final_barcode(rep) == final_barcode(fzz) and both.returncode == 0
    break
check("rep and fzz engines agree line for line", agree is True)

# vineyard
toy = write("toy.csv", "t,id,x,y\n0,0,0,0\n0,1,1,0\n0,2,3,0\n1,0,0,0\n1,1,2,0.5\n1,2,1.5,1\n"
            "2,0,0,0\n2,1,3,0\n2,2,0.5,0.5\n")
out = run("vineyard", toy, "--check-every", "1").stdout
check("toy vineyard starts at the top band", out.startswith("band 0 delta_hi inf delta_lo "))
one = write("one.csv", "t,id,x,y\n0,7,0,0\n1,7,1,1\n")
check("one point gives one band", run("vineyard", one).stdout == "band 0 delta_hi inf delta_lo 0\n0 1 1 0\n")
pts = write("pts.csv", run("--seed", "9", "gen-points", "--points", "5", "--samples", "10").stdout)
p = run("vineyard", pts, "--check-every", "1")
check("random vineyard passes every band check", p.returncode == 0 and p.stdout.count("band ") > 10)
check("vineyard output is deterministic", run("vineyard", pts).stdout == p.stdout)
p = run("vineyard", write("badpts.csv", "t,id,x,y\n0,1,0\n"), ok=False)
check("bad csv exits 2", p.returncode == 2 and "line 2" in p.stderr)

# bench
out = run("bench", write("hdr.csv", "t,id,x,y\n")).stdout.splitlines()
check("empty input benchmarks to zero counts", out[1].split()[3:11] == ["0"] * 8)
out = run("--seed", "3", "bench", "--points", "8", "--samples", "20").stdout.splitlines()
cols = dict(zip(out[0].split(), out[1].split()))
check("desk-scale update beats from scratch", float(cols["T_UP"]) < float(cols["T_FS"]))
check("bench counts switches", int(cols["ow_sw"]) > 0 and int(cols["fw_sw"]) > 0)

sys.exit(1 if FAILURES else 0)
