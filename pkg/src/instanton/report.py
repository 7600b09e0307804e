"""Report emission: aligned TSV tables and matplotlib figures.

Every report path emits a delimited table; the figure renderers write
PNG files alongside when asked.  Rationals print as "a/b".
"""

from __future__ import annotations

from fractions import Fraction

import mpmath


def show_value(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, bool):
        return "pass" if v else "FAIL"
    if isinstance(v, mpmath.mpf):
        return mpmath.nstr(v, 15)
    return str(v)


def tsv(header, rows):
    lines = ["\t".join(header)]
    for row in rows:
        lines.append("\t".join(show_value(v) for v in row))
    return "\n".join(lines) + "\n"


def aligned_table(header, rows):
    cells = [list(header)] + [[show_value(v) for v in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    out = []
    for row in cells:
        out.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(out) + "\n"


def _agg_pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def plot_lens_sweep(rows, path):
    """Residuals of lambda_I against the exact Dedekind sum, per pair."""
    plt = _agg_pyplot()
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ps = [r["p"] for r in rows]
    residuals = [max(float(r["residual"]), 1e-30) for r in rows]
    colors = ["tab:blue" if r["pass"] else "tab:red" for r in rows]
    ax.scatter(ps, residuals, s=12, c=colors)
    ax.set_yscale("log")
    ax.axhline(1e-9, color="gray", linestyle="--", linewidth=0.8,
               label="tolerance 1e-9")
    ax.set_xlabel("p")
    ax.set_ylabel("|lambda_I - s(q;p)|")
    ax.set_title("Instanton Casson-Walker vs Dedekind sums on lens spaces")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_chamber_path(steps, sigma0, path):
    """Euler-characteristic ledger along an adjacent-chamber path."""
    plt = _agg_pyplot()
    fig, ax = plt.subplots(figsize=(7, 4.2))
    chi = [0]
    for direction, _, _ in steps:
        chi.append(chi[-1] + (-1 if direction == "up" else 1))
    ax.step(range(len(chi)), chi, where="post", color="tab:blue")
    ax.scatter(range(len(chi)), chi, s=18, color="tab:blue")
    ax.set_xlabel("step along the chamber path")
    ax.set_ylabel("relative Euler characteristic of I_*")
    ax.set_title("Wall crossings: chi drops by one per signature-data increase")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_triangle_ranks(degreewise, path):
    """Rank profile of the equivariant triple over the degree window."""
    plt = _agg_pyplot()
    fig, ax = plt.subplots(figsize=(7, 4.2))
    degrees = sorted(degreewise)
    for idx, (label, style) in enumerate((("I^-", "o-"), ("I^inf", "s--"),
                                          ("I^+", "^:"))):
        ax.plot(degrees, [degreewise[j][idx] for j in degrees], style,
                label=label, markersize=4)
    ax.set_xlabel("unrolled degree")
    ax.set_ylabel("rank")
    ax.set_title("Equivariant triple, degreewise ranks")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
