"""Report emission: delimited output and matplotlib figures.

Every CLI command renders its result through this module so that the CSV
and JSON surfaces stay byte-deterministic (no timestamps, 9 significant
digits for floats, exact p/q strings for rationals) and so the optional
figure files land next to the delimited output with fixed names.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path


def fmt_float(x: float) -> str:
    return f"{x:.9g}"


def fmt_rational(x: Fraction) -> str:
    return str(x)


def rows_to_csv(columns: list[str], rows: list[list]) -> str:
    """Render rows as CSV with deterministic float formatting."""
    out = [",".join(columns)]
    for row in rows:
        out.append(
            ",".join(
                fmt_float(x) if isinstance(x, float) else str(x) for x in row
            )
        )
    return "\n".join(out) + "\n"


def payload_to_json(payload: dict) -> str:
    return json.dumps(payload, indent=1, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Figures
# ---------------------------------------------------------------------------

def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def figure_c2_curve(rows: list[dict], path: Path) -> Path:
    """c2(lambda) over the requested grid, with the truncation defect inset."""
    plt = _plt()
    lams = [row["lambda"] for row in rows]
    vals = [row["c2"] for row in rows]
    tails = [row["tail_mass"] for row in rows]
    fig, (ax, ax2) = plt.subplots(
        2, 1, figsize=(6.0, 5.0), sharex=True,
        gridspec_kw={"height_ratios": [3, 1]},
    )
    ax.plot(lams, vals, "o-", color="tab:blue")
    ax.set_ylabel(r"$c_2(\lambda)$")
    ax.grid(alpha=0.3)
    ax2.bar(lams, tails, width=0.12 * max(1.0, (max(lams) - min(lams))), color="tab:orange")
    ax2.set_xlabel(r"$\lambda$")
    ax2.set_ylabel("tail mass")
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def figure_histogram(result, path: Path) -> Path:
    """Block-size histogram of one Monte-Carlo run (log counts)."""
    plt = _plt()
    sizes = [s for s, _ in result.histogram]
    counts = [c for _, c in result.histogram]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.bar(sizes, counts, width=1.0, color="tab:blue")
    ax.set_yscale("log")
    ax.set_xlabel("largest block size (vertices)")
    ax.set_ylabel("trials")
    ax.set_title(
        f"n={result.n}, M={result.m}, {result.trials} trials: "
        f"mean {result.mean:.3f} ± {result.stderr:.3f}"
    )
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def figure_compare(payload: dict, path: Path) -> Path:
    """Theory vs empirical mean with its confidence interval."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    theory = payload["theory"]
    empirical = payload["empirical"]
    err = 1.96 * payload["stderr"]
    ax.bar([0], [theory], width=0.6, color="tab:gray", label="theory")
    ax.bar([1], [empirical], width=0.6, color="tab:blue", label="empirical")
    ax.errorbar([1], [empirical], yerr=[err], fmt="none", ecolor="black", capsize=6)
    ax.set_xticks([0, 1], ["theory", "empirical"])
    ax.set_ylabel("E(largest block size)")
    ax.set_title(
        f"{payload['scenario']}: n={payload['n']}, M={payload['M']}, "
        f"ratio {payload['ratio']:.3f}"
    )
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
