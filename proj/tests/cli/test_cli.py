"""Exit codes and output layout of the edgebatch command-line tool."""

import json
import os
import subprocess
import sys
import tempfile
from pathlib import Path

BIN = str(Path(sys.argv[1]).resolve())
failures = []


def run(*args, env=None, cwd=None):
    return subprocess.run([BIN, *args], capture_output=True, text=True, env=env, cwd=cwd)


def expect(code, *args, **kw):
    r = run(*args, **kw)
    if r.returncode != code:
        failures.append(f"{' '.join(args)}: exit {r.returncode}, wanted {code}\n{r.stderr}")
    return r


def write(dir_, name, text):
    p = Path(dir_) / name
    p.write_text(text)
    return str(p)


with tempfile.TemporaryDirectory() as tmp:
    good = write(tmp, "good.conf", "run.name = tiny\nengine.duration_ms = 60000\ntrace.kind = constant\n"
                                   "trace.rate = 100\ncost.fixed_overhead_ms = 200\n")
    expect(0, "validate", "--config", good)

    out = Path(tmp) / "explicit"
    expect(0, "run", "--config", good, "--out", str(out))
    names = sorted(p.name for p in out.iterdir())
    want = ["metrics.csv", "series_delay.csv", "series_interval.csv", "series_rate.csv", "series_workload.csv",
            "summary.json"]
    if names != want:
        failures.append(f"output files {names}")
    header = (out / "metrics.csv").read_text().splitlines()[0]
    if header != ("time_ms,batch_id,interval_ms,records,blocks,sched_delay_ms,proc_delay_ms,total_delay_ms,eta,"
                  "workload_S,rate_measured,rate_predicted,C,D,fuzzy_level"):
        failures.append(f"metrics header {header}")
    if json.loads((out / "summary.json").read_text())["run"]["name"] != "tiny":
        failures.append("summary run name")

    env = dict(os.environ, EDGEBATCH_OUT=str(Path(tmp) / "envroot"))
    expect(0, "run", "--config", good, env=env)
    if not (Path(tmp) / "envroot" / "tiny" / "metrics.csv").exists():
        failures.append("EDGEBATCH_OUT not honoured")

    plain_env = {k: v for k, v in os.environ.items() if k != "EDGEBATCH_OUT"}
    expect(0, "run", "--config", good, env=plain_env, cwd=tmp)
    if not (Path(tmp) / "out" / "tiny" / "summary.json").exists():
        failures.append("default out/<name> not used")

    expect(0, "preset", "exp1", "--disable-prediction", "--seed", "7", env=env)
    if not (Path(tmp) / "envroot" / "exp1-noprediction" / "summary.json").exists():
        failures.append("--disable-prediction output name")

    # Usage errors: 2.
    expect(2)
    expect(2, "frobnicate")
    expect(2, "run")
    expect(2, "preset", "exp9")
    expect(2, "preset", "exp1", "--seed", "x")
    expect(2, "validate", "--config", write(tmp, "unknown.conf", "engine.warp = 9\n"))
    r = expect(2, "validate", "--config", write(tmp, "bad.conf", "run.name = a\n\nengine.seed = many\n"))
    if "line 3" not in r.stderr:
        failures.append(f"parse error without line number: {r.stderr}")
    expect(2, "validate", "--config", str(Path(tmp) / "missing.conf"))
    trace = write(tmp, "bad_trace.csv", "timestamp_s,value\n0,1\n0,2\n")
    expect(2, "run", "--config", write(tmp, "t.conf", f"trace.kind = csv\ntrace.file = {trace}\n"), "--out",
           str(Path(tmp) / "t"))
    rules = write(tmp, "rules.csv", "0,0,0,0,0\n0,0,0,0,0\n")
    expect(2, "validate", "--config", write(tmp, "r.conf", f"controller.rules_file = {rules}\n"))

    # Invariant errors: 1.
    expect(1, "validate", "--config", write(tmp, "inv.conf", "engine.initial_batch_interval_ms = 1300\n"))
    expect(1, "validate", "--config",
           write(tmp, "inv2.conf", "controller.min_interval_ms = 9000\ncontroller.max_interval_ms = 4000\n"))
    expect(1, "run", "--config", write(tmp, "inv3.conf", "monitor.smoothing_coefficient = 2\n"))

    # An output path that cannot be created.
    blocker = write(tmp, "blocker", "")
    expect(1, "run", "--config", good, "--out", str(Path(blocker) / "sub"))

    expect(0, "--help")

for f in failures:
    print("FAIL", f)
print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
