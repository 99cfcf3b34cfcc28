"""Plot the potential and ground-state datasets behind figures 1a..5b.

Needs matplotlib (pip install -e .[demos]). Writes one PNG per figure into the
directory given on the command line (default: figures/).

    python3 demos/plot_figures.py out_dir
"""

import io
import sys
from contextlib import redirect_stdout
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from direop.cli import FIGURES, main

out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else "figures")
out_dir.mkdir(parents=True, exist_ok=True)

for key in FIGURES:
    for panel in "ab":
        buf = io.StringIO()
        with redirect_stdout(buf):
            assert main(["figure", key + panel]) == 0
        lines = buf.getvalue().splitlines()
        columns = lines[1].split(",")
        data = np.loadtxt(lines[2:], delimiter=",")
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for m in (0, 1, 2):
            rows = data[data[:, 0] == m]
            y = rows[:, columns.index("v1" if panel == "a" else "psi1")]
            ax.plot(rows[:, 1], y, label=f"m={m}")
        ax.set_xlabel("x")
        ax.set_ylabel("V1" if panel == "a" else "psi1 (ground state)")
        if panel == "a":
            finite = data[:, columns.index("v1")]
            ax.set_ylim(np.min(finite) - 1, np.percentile(finite, 90))
        ax.legend()
        ax.set_title(f"figure {key}{panel}")
        fig.tight_layout()
        fig.savefig(out_dir / f"figure_{key}{panel}.png", dpi=120)
        plt.close(fig)
        print("wrote", out_dir / f"figure_{key}{panel}.png")
