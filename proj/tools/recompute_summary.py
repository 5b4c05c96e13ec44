#!/usr/bin/env python3
"""Recompute summary.json from metrics.csv and compare.

Usage: recompute_summary.py <run-dir>

Only the run parameters recorded under "run" in summary.json are taken from
it; every statistic is derived again from the metrics rows.
"""

import csv
import json
import math
import sys
from pathlib import Path

CONVERGENCE_TICKS = 20


def load(run_dir):
    batches, ticks = [], []
    with open(run_dir / "metrics.csv", newline="") as f:
        for row in csv.DictReader(f):
            if row["batch_id"]:
                batches.append({"time": int(row["time_ms"]), "records": int(row["records"]),
                                "total": int(row["total_delay_ms"])})
            else:
                ticks.append({
                    "time": int(row["time_ms"]),
                    "interval": int(row["interval_ms"]),
                    "S": float(row["workload_S"]),
                    "meas": float(row["rate_measured"]) if row["rate_measured"] else None,
                    "pred": float(row["rate_predicted"]) if row["rate_predicted"] else None,
                    "acted": row["fuzzy_level"] != "",
                })
    return batches, ticks


def recompute(batches, ticks, run):
    out = {}
    window, block, start = run["resample_interval_ms"], run["block_interval_ms"], run["control_start_ms"]

    # A forecast made at one tick is scored against the rate the next tick
    # reads, provided the two ticks see consecutive windows.
    errors, last = [], None
    for t in ticks:
        if t["meas"] is None or t["pred"] is None:
            continue
        w = t["time"] // window - 1
        if last is not None and w == last[0] + 1 and t["meas"] > 0:
            errors.append(abs(last[1] - t["meas"]) / t["meas"])
        last = (w, t["pred"])
    out["prediction_error_mean"] = sum(errors) / len(errors) if errors else None
    out["prediction_error_max"] = max(errors) if errors else None
    out["prediction_samples"] = len(errors)

    after = [t for t in ticks if t["time"] >= start]
    conv = None
    for k in range(len(after) - CONVERGENCE_TICKS + 1):
        span = after[k:k + CONVERGENCE_TICKS]
        if max(abs(t["interval"] - span[0]["interval"]) for t in span) <= block:
            conv = after[k]
            break
    out["convergence_time_ms"] = conv["time"] - start if conv else None
    out["converged_interval_ms"] = conv["interval"] if conv else None
    steady = [t["S"] for t in ticks if conv and t["time"] > conv["time"]]
    out["steady_workload_mean"] = sum(steady) / len(steady) if steady else None
    out["steady_workload_max"] = max(steady) if steady else None

    delays = [b["total"] for b in batches]
    out["total_delay_mean_ms"] = sum(delays) / len(delays) if delays else None
    out["total_delay_max_ms"] = max(delays) if delays else None

    episodes, onset, longest = 0, None, None
    for t in ticks:
        if onset is None and t["S"] > 1:
            onset = t["time"]
            episodes += 1
        elif onset is not None and t["S"] < 1:
            longest = max(longest or 0, t["time"] - onset)
            onset = None
    out["overload_episodes"] = episodes
    out["overload_recovery_max_ms"] = longest
    out["overload_unrecovered"] = onset is not None

    out["records_processed"] = sum(b["records"] for b in batches)
    out["batches"] = len(batches)
    out["ticks"] = len(ticks)
    out["workload_mean"] = sum(t["S"] for t in ticks) / len(ticks) if ticks else 0.0
    out["workload_max"] = max((t["S"] for t in ticks), default=0.0)
    moves = [abs(b["interval"] - a["interval"]) for a, b in zip(ticks, ticks[1:]) if b["acted"]]
    out["mean_abs_interval_change_ms"] = sum(moves) / len(moves) if moves else 0.0
    return out


def same(a, b):
    if a is None or b is None or isinstance(a, bool) or isinstance(b, bool):
        return a == b
    return math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-12)


def main():
    run_dir = Path(sys.argv[1])
    summary = json.loads((run_dir / "summary.json").read_text())
    batches, ticks = load(run_dir)
    mine = recompute(batches, ticks, summary["run"])
    bad = [k for k in mine if not same(mine[k], summary.get(k))]
    extra = [k for k in summary if k != "run" and k not in mine]
    for k in bad:
        print(f"MISMATCH {k}: summary {summary.get(k)!r}, recomputed {mine[k]!r}")
    for k in extra:
        print(f"UNCHECKED {k}")
    print(f"{run_dir.name}: {len(mine) - len(bad)}/{len(mine)} fields agree")
    return 1 if bad or extra else 0


if __name__ == "__main__":
    sys.exit(main())
