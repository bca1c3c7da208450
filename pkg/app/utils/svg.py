"""Line-plot SVG output for trajectories and sweeps."""

import io
from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


FIGSIZE = (7.2, 4.4)
# Fixed element ids and no timestamp.
SVG_RC = {"svg.hashsalt": "kd-nonmarkov", "svg.fonttype": "none"}


def render_line_plot(
	x: Sequence[float],
	series: Mapping[str, Sequence[float]],
	title: str = "",
	x_label: str = "",
) -> str:
	x = np.asarray(x, dtype=float)
	with plt.rc_context(SVG_RC):
		fig, ax = plt.subplots(figsize=FIGSIZE)
		try:
			for name, values in series.items():
				ax.plot(x, np.asarray(values, dtype=float), label=name, linewidth=1.5)
			ax.set_title(title)
			ax.set_xlabel(x_label)
			ax.grid(alpha=0.3)
			if series:
				ax.legend(loc="upper right")
			fig.tight_layout()
			buf = io.StringIO()
			fig.savefig(buf, format="svg", metadata={"Date": None})
		finally:
			plt.close(fig)
	return buf.getvalue()


def write_line_plot(path: Path, x: Sequence[float], series: Mapping[str, Sequence[float]], title: str = "", x_label: str = "") -> Path:
	path = Path(path)
	if path.parent != Path("."):
		path.parent.mkdir(parents=True, exist_ok=True)
	path.write_text(render_line_plot(x, series, title, x_label), encoding="utf-8")
	return path
