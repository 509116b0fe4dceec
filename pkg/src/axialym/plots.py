"""Figure rendering for CLI reports: one PNG per run, saved next to the
delimited output."""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_kappa_series(rows, ycols, path, title, target=None, logx=True):
    """Generic kappa-sweep line plot for one or more row columns."""
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    ks = [r["kappa"] for r in rows]
    for col in ycols:
        ax.plot(ks, [r[col] for r in rows], "o-", label=col)
    if target is not None:
        ax.axhline(target, color="k", ls="--", lw=0.8, label="target")
    if logx:
        ax.set_xscale("log")
    ax.set_xlabel("kappa")
    ax.set_title(title)
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_convergence(rows, path, title):
    """Log-log error vs grid size with a first-order reference slope."""
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    ns = [r["n_grid"] for r in rows]
    errs = [r["error"] for r in rows]
    ax.loglog(ns, errs, "o-", label="error")
    ref = [errs[0] * ns[0] / n for n in ns]
    ax.loglog(ns, ref, "k--", lw=0.8, label="first order")
    ax.set_xlabel("grid size")
    ax.set_ylabel("max deviation")
    ax.set_title(title)
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_potential(rows, path):
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    groups = sorted({r["group"] for r in rows})
    for g in groups:
        sub = [r for r in rows if r["group"] == g]
        ax.plot([r["R"] for r in sub], [r["V"] for r in sub], "o-", label=g)
    ax.set_xlabel("R")
    ax.set_ylabel("V(R)")
    ax.set_title("quark potential")
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_bars(labels, values, path, title, ylabel):
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    ax.bar([str(l) for l in labels], values)
    ax.set_yscale("log")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    return _save(fig, path)


def plot_mc(record, path):
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    mean, err = record["mean_re"], record["stderr"]
    ax.errorbar([0], [mean], yerr=[3 * err], fmt="o", capsize=4,
                label="estimate (3 stderr)")
    if record.get("reference") is not None:
        ax.axhline(record["reference"], color="k", ls="--", lw=0.8,
                   label="reference")
    ax.set_xticks([])
    ax.set_title("Wilson loop MC estimate")
    ax.legend(fontsize=8)
    return _save(fig, path)
