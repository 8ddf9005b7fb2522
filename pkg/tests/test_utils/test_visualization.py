"""Tests for text, Graphviz and SVG renderings."""

import xml.etree.ElementTree as ET

import pytest

from cier.models.graph import CausalEffectTable, EffectEntry, EndpointMark, Pag
from cier.models.metrics import Metrics
from cier.utils.visualization import (
    explain_effects,
    label_series,
    metrics_table,
    pag_to_dot,
    pag_to_text,
    score_plot_svg,
    write_score_plot,
)

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture
def pag():
    graph = Pag(["A", "B", "y"])
    graph.add_directed(0, 2)
    graph.add_edge(1, 2, EndpointMark.CIRCLE, EndpointMark.ARROW)
    return graph


@pytest.mark.unit
class TestGraphRendering:
    """Test cases for PAG renderings."""

    def test_text(self, pag):
        assert pag_to_text(pag).splitlines() == ["A -> y", "B o-> y"]

    def test_dot(self, pag):
        dot = pag_to_dot(pag, name="G")

        assert dot.startswith("digraph G {")
        assert 'n2 [label="y", shape=box];' in dot
        assert 'n1 -> n2 [mark="o>"' in dot
        assert "arrowtail=odot, arrowhead=normal" in dot

    def test_explain_effects(self, pag):
        table = CausalEffectTable({
            0: EffectEntry(0, strength=1.5, relevant=True, direct_effect=1.5, paths=[[0, 2]]),
            1: EffectEntry(1, strength=0.0, relevant=False),
        })

        report = explain_effects(table, pag)

        assert "Relevant factors: 1 of 2" in report
        assert "A: strength 1.5000 (relevant)" in report
        assert "  path: A -> y" in report
        assert "B: strength 0.0000 (not relevant)" in report
        assert report.index("A:") < report.index("B:")


@pytest.mark.unit
class TestScoreRendering:
    """Test cases for tables and score plots."""

    def test_metrics_table(self):
        table = metrics_table({"cier": Metrics(AS=1.0, BS=2.0, SAS=3, ACS=4.5)})
        lines = table.splitlines()
        assert lines[0].split() == ["run", "AS", "BS", "SAS", "ACS"]
        assert lines[2].split() == ["cier", "1.000", "2.000", "3", "4.500"]

    def test_svg_has_one_polyline_per_series(self):
        root = ET.fromstring(score_plot_svg({"uniform": [0, 1, 2], "cier": [1, 1, 3]}))
        lines = root.findall(f"{SVG}polyline")

        assert [line.get("data-series") for line in lines] == ["uniform", "cier"]
        assert len(lines[0].get("points").split()) == 3

    def test_flat_and_empty_series(self, tmp_path):
        path = tmp_path / "plot.svg"
        write_score_plot({"flat": [2.0, 2.0], "empty": []}, path, title="t")
        root = ET.fromstring(path.read_text(encoding="utf-8"))
        assert root.find(f"{SVG}title").text == "t"

    def test_label_series(self):
        labels = label_series(["runs/a/scores.csv", "runs/b/scores.csv", "other/a/scores.csv"], [[1], [2], [3]])
        assert list(labels) == ["a", "b", "other/a/scores.csv"]
