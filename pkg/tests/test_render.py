import re
from fractions import Fraction

import pytest

from rigidcircle import modulus, render, scene
from rigidcircle.scene import Word


@pytest.fixture(scope="module")
def pres1_json():
    return scene.generation(1, scene.PRESENTATION).to_dict()


def test_eight_circles(exact1, pres1_json):
    for data in (exact1.to_dict(), pres1_json):
        svg = render.render_svg(data)
        assert len(re.findall(r"<circle ", svg)) == 8
        assert len(re.findall(r"<rect ", svg)) == 4
        assert len(re.findall(r"<line ", svg)) == 16


def test_twelve_significant_digits(exact1):
    svg = render.render_svg(exact1.to_dict())
    nums = re.findall(r'cx="([^"]+)"', svg)
    assert "-2.24994251437" in nums
    assert all(len(re.sub(r"[-.]|e.*", "", v).lstrip("0")) <= 12 for v in nums)


def test_y_axis_flipped(exact1):
    svg = render.render_svg(exact1.to_dict())
    # Le2 sits above Le1, so its SVG y is more negative
    y1 = float(re.search(r'data-word="Le1"', svg) and re.search(r'<rect x="[^"]+" y="([^"]+)"[^>]*Le1', svg).group(1))
    y2 = float(re.search(r'<rect x="[^"]+" y="([^"]+)"[^>]*Le2', svg).group(1))
    assert y2 < y1


def test_stroke_scales_with_window(exact1):
    data = exact1.to_dict()
    wide = render.render_svg(data, (-3, -1, 3, 2))
    narrow = render.render_svg(data, (Fraction(-21, 10), 0, Fraction(-19, 10), Fraction(1, 10)))
    sw = lambda s: float(re.search(r'stroke-width="([^"]+)"', s).group(1))
    assert sw(wide) == pytest.approx(6 / 800)
    assert sw(narrow) == pytest.approx(0.2 / 800)
    # a narrow window drops the objects it does not meet
    assert narrow.count("<circle") < wide.count("<circle")


def test_window_missing_scene(exact1):
    with pytest.raises(render.RenderError):
        render.render_svg(exact1.to_dict(), (100, 100, 101, 101))
    with pytest.raises(render.RenderError):
        render.render_svg(exact1.to_dict(), (1, 1, 0, 2))


def test_log_geometry_refused():
    data = {"objects": [{"word": "Le1", "type": "disk", "side": "Le",
                         "center": [{"rat": "0"}, {"rat": "0"}],
                         "radius": {"log": {"sign": 1, "ln": {"rat": "-5"}}}}]}
    with pytest.raises(render.RenderError):
        render.render_svg(data)


def test_chain_overlay(pres1_json):
    sc = scene.generation(1, scene.PRESENTATION)
    pts = modulus.chain_outline(sc, Word.parse("(Le,1)"))
    svg = render.render_svg(pres1_json, chain_points=pts)
    assert svg.count("<polyline") == 1
    assert "stroke-dasharray" in svg
    assert svg.count("<circle") == 8


def test_deterministic(exact1):
    assert render.render_svg(exact1.to_dict()) == render.render_svg(scene.generation(1).to_dict())
