"""
The command-line pipeline end to end
====================================

Write a synthetic table, then ingest, forecast, evaluate and measure
warping with the ``dstwarp`` command. Every output starts with the
configuration that produced it.
"""

# %%
import subprocess
import sys
from pathlib import Path

from dstwarp.synthetic import write_synthetic_csv

work = Path("cli_demo")
work.mkdir(exist_ok=True)
write_synthetic_csv(work / "raw.csv", hours=2 * 8760, seed=7)


def dstwarp(*args):
    cmd = [sys.executable, "-m", "dstwarp.cli", *args]
    print("$ dstwarp", " ".join(args))
    out = subprocess.run(cmd, cwd=work, check=True, capture_output=True, text=True).stdout
    print(out[:800])


# %%
dstwarp("ingest", "--input", "raw.csv", "--out", "clean.csv", "--summary", "ingest.json")
dstwarp("forecast", "--input", "clean.csv", "--model", "ar", "--out", "pred.csv", "--obs-out", "obs.csv")
dstwarp("evaluate", "--pred", "pred.csv", "--obs", "obs.csv", "--format", "markdown")
dstwarp("warp-measure", "--pred", "pred.csv", "--obs", "obs.csv", "--format", "markdown")

# %%
dstwarp("forecast", "--input", "clean.csv", "--out", "persist.csv")
dstwarp("warp-measure", "--pred", "persist.csv", "--obs", "obs.csv", "--format", "markdown")
dstwarp("stats", "pacf", "--input", "obs.csv", "--max-lag", "6")
print((work / "pred.csv").read_text().splitlines()[0])
