"""Write the CSV data for all figure presets and, if matplotlib is present, plots.

    python scripts/reproduce_figures.py [--out results] [--threads 4] [--no-plots]
"""

import argparse
import csv
import pathlib
import sys

from packetborn.cli import main as cli_main


def run(outdir: pathlib.Path, threads: int) -> list[pathlib.Path]:
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    jobs = [(1, "gauss-gauss"), (1, "hydrogen"), (2, "gauss-gauss"), (2, "hydrogen"), (3, "gauss-gauss"), (4, "hydrogen")]
    for n, model in jobs:
        path = outdir / f"figure{n}_{model}.csv"
        code = cli_main(["figure", str(n), "--model", model, "--threads", str(threads), "-o", str(path),
                         "--manifest", str(path.with_suffix(".json"))])
        if code != 0:
            print(f"figure {n} ({model}) exited with {code}", file=sys.stderr)
        written.append(path)
    return written


def load(path):
    with open(path) as fh:
        rows = list(csv.reader(line for line in fh if not line.startswith("#")))
    header, body = rows[0], rows[1:]
    return [{k: v for k, v in zip(header, r)} for r in body]


def plot(paths, outdir):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    for path in paths:
        rows = load(path)
        fig, ax = plt.subplots(figsize=(5, 3.5))
        name = path.stem
        if name.startswith("figure1"):
            ax.semilogx([float(r["sigma_ratio"]) for r in rows], [float(r["nu_ratio"]) for r in rows])
            ax.set_xlabel("sigma / a")
            ax.set_ylabel("nu / nu_st")
        else:
            key, x_name, y_name = {
                "figure2": ("sigma_ratio", "theta", "rel_value"),
                "figure3": ("sigma_ratio", "b_ratio", "B2"),
                "figure4": (("b_ratio", "theta"), "phi", "rel_value"),
            }[name.split("_")[0]]
            groups = {}
            for r in rows:
                keys = key if isinstance(key, tuple) else (key,)
                label = ", ".join(r[k] if r[k] == "inf" else f"{float(r[k]):.4g}" for k in keys)
                groups.setdefault(label, []).append((float(r[x_name]), float(r[y_name])))
            for label, pts in groups.items():
                ax.plot(*zip(*pts), label=label)
            ax.set_xlabel(x_name)
            ax.set_ylabel(y_name)
            ax.legend(fontsize=7)
        ax.set_title(name)
        fig.tight_layout()
        fig.savefig(outdir / f"{name}.png", dpi=120)
        plt.close(fig)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    ap.add_argument("--threads", type=int, default=4)
    ap.add_argument("--no-plots", action="store_true")
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    files = run(out, args.threads)
    if not args.no_plots:
        try:
            plot(files, out)
        except ImportError:
            print("matplotlib not installed; CSV files only", file=sys.stderr)
    for f in files:
        print(f)
