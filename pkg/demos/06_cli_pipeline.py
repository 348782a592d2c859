"""End-to-end pipeline through the external interfaces only.

Writes a scenario config, runs the `simulate` CLI, and renders the results
with the `plots` CLI (if the cascadewg-plots package is installed). Everything
lands in demos/output/pipeline/.

Run:  python3 demos/06_cli_pipeline.py        (~30 s)
"""

import json
import shutil
import subprocess
import sys
from pathlib import Path

out = Path(__file__).parent / "output" / "pipeline"
out.mkdir(parents=True, exist_ok=True)

timetrace_cfg = out / "timetrace.json"
timetrace_cfg.write_text(json.dumps({
    "scenario": "timetrace",
    "n_atoms": 300,
    "n_samples": 10,
    "seed": 99,
    "drive": {"power_watts": [60e-9]},
    "grid": {"t_start": -5.0, "t_end": 100.0, "dt": 0.02},
    "out_dir": str(out),
}, indent=2))

atom_sweep_cfg = out / "atom_sweep.json"
atom_sweep_cfg.write_text(json.dumps({
    "scenario": "atom-sweep",
    "n_atoms": [25, 50, 100, 200, 400],
    "n_samples": 10,
    "seed": 99,
    "drive": {"pulse_area_over_pi": [0.03, 1.0]},
    "grid": {"t_start": -5.0, "t_end": 100.0, "dt": 0.02},
    "out_dir": str(out),
}, indent=2))

for scenario, cfg in (("timetrace", timetrace_cfg), ("atom-sweep", atom_sweep_cfg)):
    print(f"$ simulate {scenario} --config {cfg.name}")
    proc = subprocess.run(["simulate", scenario, "--config", str(cfg)])
    if proc.returncode != 0:
        sys.exit(proc.returncode)

if shutil.which("plots") is None:
    print("cascadewg-plots not installed; skipping figure rendering")
    sys.exit(0)

traces = sorted(str(p) for p in out.glob("timetrace_P6e-08W_*.csv"))
jobs = [
    ["plots", "fig2", "--in", *traces, "--out", str(out / "fig2_60nW.png")],
    ["plots", "fig4", "--in", str(out / "atom_sweep.csv"),
     str(out / "atom_sweep_linear.csv"), "--out", str(out / "fig4.png")],
    ["plots", "figS2", "--in", str(out / "atom_sweep.csv"),
     str(out / "atom_sweep_sigma0.csv"), "--out", str(out / "figS2.png")],
]
for job in jobs:
    print("$", " ".join(job[:2]), "...")
    subprocess.run(job, check=True)
print(f"done; see {out}/")
