"""SVG rendering: deterministic output, structural sanity, error paths."""

import xml.etree.ElementTree as ET

import pytest

from slicecf.config import SimConfig
from slicecf.errors import ConfigError
from slicecf.harness import run_campaign
from slicecf.plotting import PLOT_KINDS, plot_campaign, render_plot

CFG = SimConfig(num_ues=10)


@pytest.fixture(scope="module")
def campaign():
    return run_campaign(CFG, "k", [6, 10], drops=2, master_seed=13)


@pytest.fixture(scope="module")
def mix_campaign():
    return run_campaign(CFG, "mix", [0.2, 0.5, 0.8], drops=1, master_seed=13)


@pytest.mark.parametrize("kind", PLOT_KINDS)
def test_renders_wellformed_svg(campaign, kind):
    svg = render_plot(campaign, kind)
    assert svg.startswith("<svg")
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")


def test_rendering_is_deterministic(campaign):
    for kind in PLOT_KINDS:
        assert render_plot(campaign, kind) == render_plot(campaign, kind)


def test_sumrate_has_one_line_per_scheme(campaign):
    svg = render_plot(campaign, "sumrate")
    assert svg.count("<polyline") == 3
    for name in ("proposed", "oracle", "baseline"):
        assert name in svg


def test_success_chart_covers_both_slices(campaign):
    svg = render_plot(campaign, "success")
    # 3 schemes x 2 slices
    assert svg.count("<polyline") == 6
    assert "URLLC" in svg and "eMBB" in svg


def test_mix_sweep_renders(mix_campaign):
    svg = render_plot(mix_campaign, "sumrate")
    assert "<polyline" in svg


def test_unknown_kind(campaign):
    with pytest.raises(ConfigError):
        render_plot(campaign, "heatmap")


def test_line_kinds_need_two_points():
    single = run_campaign(CFG, "k", [8], drops=1, master_seed=3)
    for kind in ("sumrate", "success", "runtime"):
        with pytest.raises(ConfigError):
            render_plot(single, kind)
    # the bar chart is happy with one sweep point
    assert render_plot(single, "sensitivity").startswith("<svg")


def test_empty_campaign_rejected():
    empty = run_campaign(CFG, "k", [], drops=1, master_seed=3)
    with pytest.raises(ConfigError):
        render_plot(empty, "sensitivity")


def test_plot_campaign_writes_file(campaign, tmp_path):
    path = tmp_path / "chart.svg"
    returned = plot_campaign(campaign, "runtime", path)
    assert returned == str(path)
    assert path.read_text(encoding="utf-8") == render_plot(campaign, "runtime")
