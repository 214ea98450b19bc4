"""Optional PNG figures; matplotlib is imported only when a figure is requested."""

from pathlib import Path

from .errors import ValidationError


def _pyplot():
    try:
        import matplotlib
    except ImportError:
        raise ValidationError("plotting needs matplotlib (pip install 'artifact[plot]')") from None
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def line_plot(path, x, series, xlabel="", ylabel="", title="", logx=False, logy=False, marker=None):
    """Save one axes with a line per ``label -> y`` entry of ``series``."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, y in series.items():
        ax.plot(x, y, label=label, marker=marker, lw=1)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(series) > 1:
        ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return Path(path)
