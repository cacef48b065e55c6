"""
Result emission: CSV with a metadata header, rich tables, SVG polylines

Output is deterministic: no timestamps, fixed float formatting, and rows in
grid order regardless of how a sweep was scheduled.
"""
import io
import shlex
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, TextIO

import numpy as np
import pandas as pd
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from .. import __version__

FLOAT_FORMAT = "%.12g"


def command_line(argv: Sequence[str]) -> str:
    return "qcc " + shlex.join(list(argv))


def metadata_header(argv: Sequence[str], lines: Iterable[str] = ()) -> List[str]:
    """`#`-prefixed provenance lines: tool version, command line, units, extras"""
    header = [f"qcontrol-cost {__version__}", f"command: {command_line(argv)}"]
    header.extend(lines)
    return [f"# {line}" for line in header]


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        if np.isnan(value):
            return "nan"
        if np.isinf(value):
            return "+inf" if value > 0 else "-inf"
        return FLOAT_FORMAT % value
    return str(value)


def frame_to_csv(frame: pd.DataFrame, header: Sequence[str] = ()) -> str:
    buffer = io.StringIO()
    for line in header:
        buffer.write(line + "\n")
    formatted = frame.apply(lambda col: col.map(format_value))
    formatted.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def write_csv(frame: pd.DataFrame, header: Sequence[str] = (),
              path: Optional[Path] = None, stream: Optional[TextIO] = None) -> str:
    text = frame_to_csv(frame, header)
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    elif stream is not None:
        stream.write(text)
    return text


def render_table(console: Console, frame: pd.DataFrame, title: str = "",
                 notes: Sequence[str] = ()) -> None:
    table = Table(title=title or None, show_lines=False)
    for column in frame.columns:
        table.add_column(str(column), justify="right")
    for row in frame.itertuples(index=False):
        table.add_row(*(escape(format_value(v)) for v in row))
    console.print(table)
    for note in notes:
        console.print(note, markup=False, highlight=False)


def write_svg(frame: pd.DataFrame, x: str, ys: Sequence[str], path: Path,
              group: Optional[str] = None, logx: bool = True, title: str = "") -> Path:
    """Plain polyline chart, one panel per y column, one line per group value"""
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError as exc:
        raise ImportError("SVG output needs matplotlib: pip install 'qcontrol-cost[visualization]'") from exc

    plt.rcParams["svg.hashsalt"] = "qcontrol-cost"
    fig, axes = plt.subplots(len(ys), 1, figsize=(6, 3 * len(ys)), sharex=True, squeeze=False)
    groups = [(None, frame)] if group is None else list(frame.groupby(group, sort=True))
    for ax, y in zip(axes[:, 0], ys):
        for key, part in groups:
            label = None if key is None else f"{group}={format_value(key)}"
            ax.plot(part[x].to_numpy(), part[y].to_numpy(), label=label)
        if logx:
            ax.set_xscale("log")
        ax.set_ylabel(y)
        if group is not None:
            ax.legend()
    axes[-1, 0].set_xlabel(x)
    if title:
        fig.suptitle(title)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
