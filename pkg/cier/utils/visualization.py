"""Text, Graphviz and SVG renderings of analysis results and training curves."""

import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Union

import numpy as np

from ..models.factors import TscfDictionary
from ..models.graph import CausalEffectTable, EndpointMark, Pag
from ..models.metrics import Metrics

PathLike = Union[str, Path]

_ARROW_STYLE = {
    EndpointMark.ARROW: "normal",
    EndpointMark.TAIL: "none",
    EndpointMark.CIRCLE: "odot",
}
_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"]


def pag_to_dot(pag: Pag, name: str = "PAG") -> str:
    """Graphviz text with one edge per adjacency and its endpoint marks in ``mark="xy"``."""
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=ellipse];"]
    for node in pag.nodes:
        shape = ", shape=box" if node == pag.outcome else ""
        lines.append(f'  n{node} [label="{pag.names[node]}"{shape}];')
    for a, mark_a, b, mark_b in pag.edges():
        lines.append(
            f'  n{a} -> n{b} [mark="{pag.edge_label(a, b)}", dir=both, '
            f'arrowtail={_ARROW_STYLE[mark_a]}, arrowhead={_ARROW_STYLE[mark_b]}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def pag_to_text(pag: Pag) -> str:
    """One line per edge: ``A -> B`` for directed edges, the mark notation otherwise."""
    lines = []
    for a, _, b, _ in pag.edges():
        if pag.is_directed(a, b):
            lines.append(f"{pag.names[a]} -> {pag.names[b]}")
        elif pag.is_directed(b, a):
            lines.append(f"{pag.names[b]} -> {pag.names[a]}")
        else:
            lines.append(pag.describe_edge(a, b))
    return "\n".join(lines)


def metrics_table(rows: Mapping[str, Metrics]) -> str:
    """Fixed-width table of AS, BS, SAS and ACS per run."""
    width = max([len("run")] + [len(k) for k in rows])
    header = f"{'run':<{width}}  {'AS':>10}  {'BS':>10}  {'SAS':>6}  {'ACS':>12}"
    lines = [header, "-" * len(header)]
    for label, m in rows.items():
        lines.append(f"{label:<{width}}  {m.AS:>10.3f}  {m.BS:>10.3f}  {m.SAS:>6d}  {m.ACS:>12.3f}")
    return "\n".join(lines)


def score_plot_svg(series: Mapping[str, Sequence[float]], width: int = 640, height: int = 360,
                   title: str = "Score per episode") -> str:
    """Line plot of score against episode, one ``<polyline>`` per series."""
    margin = 40
    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg",
                     width=str(width), height=str(height), viewBox=f"0 0 {width} {height}")
    ET.SubElement(svg, "title").text = title
    ET.SubElement(svg, "rect", x="0", y="0", width=str(width), height=str(height), fill="white")

    values = [np.asarray(v, dtype=float) for v in series.values() if len(v)]
    if values:
        low = min(float(v.min()) for v in values)
        high = max(float(v.max()) for v in values)
        longest = max(len(v) for v in values)
    else:
        low, high, longest = 0.0, 1.0, 1
    if high == low:
        low, high = low - 1.0, high + 1.0
    plot_w, plot_h = width - 2 * margin, height - 2 * margin
    x_step = plot_w / max(longest - 1, 1)

    ET.SubElement(svg, "line", x1=str(margin), y1=str(height - margin), x2=str(width - margin),
                  y2=str(height - margin), stroke="black")
    ET.SubElement(svg, "line", x1=str(margin), y1=str(margin), x2=str(margin),
                  y2=str(height - margin), stroke="black")
    for text, y in ((f"{high:.3g}", margin), (f"{low:.3g}", height - margin)):
        label = ET.SubElement(svg, "text", x="4", y=str(y), fill="black")
        label.set("font-size", "10")
        label.text = text

    for i, (name, scores) in enumerate(series.items()):
        scores = np.asarray(scores, dtype=float)
        xs = margin + np.arange(len(scores)) * x_step
        ys = height - margin - (scores - low) / (high - low) * plot_h
        color = _PALETTE[i % len(_PALETTE)]
        line = ET.SubElement(svg, "polyline", fill="none", stroke=color,
                             points=" ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys)))
        line.set("stroke-width", "1.5")
        line.set("data-series", str(name))
        legend = ET.SubElement(svg, "text", x=str(width - margin - 120), y=str(margin + 14 * (i + 1)),
                               fill=color)
        legend.set("font-size", "11")
        legend.text = str(name)
    return ET.tostring(svg, encoding="unicode")


def write_score_plot(series: Mapping[str, Sequence[float]], file_path: PathLike, **kwargs) -> None:
    Path(file_path).write_text(score_plot_svg(series, **kwargs), encoding="utf-8")


def explain_effects(effect_table: CausalEffectTable, pag: Pag,
                    dictionary: Optional[TscfDictionary] = None) -> str:
    """Human-readable account of which action patterns drive the reward and through which paths."""
    lines = ["Causal factor report", "=" * 40]
    relevant = effect_table.relevant_factors()
    lines.append(f"Relevant factors: {len(relevant)} of {len(effect_table.entries)}")
    lines.append(f"Path aggregation: {effect_table.aggregation}")
    lines.append("")
    ordered = sorted(effect_table.entries.values(), key=lambda e: (-e.strength, e.factor))
    for entry in ordered:
        name = pag.names[entry.factor] if entry.factor < len(pag.names) else f"U{entry.factor}"
        status = "relevant" if entry.relevant else "not relevant"
        lines.append(f"{name}: strength {entry.strength:.4f} ({status})")
        if dictionary is not None and entry.factor < dictionary.k_prime:
            factor = dictionary.factors[entry.factor]
            medoid = factor.medoid
            lines.append(f"  medoid: episode {medoid.episode_id}, steps {medoid.start}-{medoid.end}")
            lines.append(f"  members: {factor.member_count}, mean length {factor.mean_length:.1f}")
        if entry.relevant:
            lines.append(f"  direct effect on {pag.names[pag.outcome]}: {entry.direct_effect:+.4f}")
            for path in entry.paths:
                lines.append("  path: " + " -> ".join(pag.names[n] for n in path))
    return "\n".join(lines) + "\n"


def _series_names(runs: Sequence[str]) -> List[str]:
    return [Path(r).parent.name or Path(r).stem for r in runs]


def label_series(paths: Sequence[str], scores: Sequence[Sequence[float]]) -> Dict[str, Sequence[float]]:
    """Map each score file to a unique series label (its directory name, else its stem)."""
    labels = _series_names(paths)
    result: Dict[str, Sequence[float]] = {}
    for label, path, values in zip(labels, paths, scores):
        key = label if label not in result else str(path)
        result[key] = values
    return result
