"""Test the module `feasible_region.plot`."""

# COMPLETED
import os
import tempfile
import unittest
from xml.etree import ElementTree

from feasible_region import plot
from feasible_region.engine.clip_engine import new_box
from feasible_region.engine.constraint_normalizer import RawConstraint

SVG = "{http://www.w3.org/2000/svg}"


def render(*constraints, title=""):
    """Render the square [0, 10] x [0, 10] clipped by (a, b, c) triples."""
    region = new_box(10.0, 10.0)
    for a, b, c in constraints:
        region.add_constraint(RawConstraint(float(a), float(b), float(c)))
    return ElementTree.fromstring(plot.render_svg(region.snapshot(), title))


class TestRenderSvg(unittest.TestCase):
    """Test the function `render_svg`."""

    def test_polygon(self):
        """Check that a polygon is drawn with a marker per vertex."""
        root = render((1, 1, 5), title="pentagon")
        self.assertEqual(root.find(f"{SVG}title").text, "pentagon")
        polygon = root.find(f"{SVG}polygon")
        self.assertEqual(len(polygon.get("points").split()), 5)
        self.assertEqual(len(root.findall(f"{SVG}circle")), 5)

    def test_title_escaped(self):
        """Check that markup characters of the title are escaped."""
        for title in ("a&b<c>.json", "</title><script/>"):
            root = render(title=title)
            self.assertEqual(root.find(f"{SVG}title").text, title)
            self.assertIsNone(root.find(f"{SVG}script"))

    def test_viewbox(self):
        """Check that the vertices are scaled into the margins of the viewBox."""
        root = render()
        for circle in root.findall(f"{SVG}circle"):
            for name in ("cx", "cy"):
                value = float(circle.get(name))
                self.assertGreaterEqual(value, plot.MARGIN)
                self.assertLessEqual(value, plot.VIEW_SIZE - plot.MARGIN)
        # The y axis points up: the origin is drawn at the bottom left
        first = root.find(f"{SVG}circle")
        self.assertEqual(
            (float(first.get("cx")), float(first.get("cy"))),
            (plot.MARGIN, plot.VIEW_SIZE - plot.MARGIN),
        )

    def test_degenerate_regions(self):
        """Check the drawings of segments, points and empty regions."""
        segment = render((1, 0, 10))
        self.assertIsNotNone(segment.find(f"{SVG}line"))
        self.assertEqual(len(segment.findall(f"{SVG}circle")), 2)
        point = render((1, 1, 20))
        self.assertIsNone(point.find(f"{SVG}polygon"))
        self.assertEqual(len(point.findall(f"{SVG}circle")), 1)
        empty = render((1, 1, 21))
        self.assertEqual(empty.find(f"{SVG}text").text, "empty")
        self.assertIsNone(empty.find(f"{SVG}circle"))

    def test_write_svg(self):
        """Check that the figure is written to a file."""
        region = new_box(1.0, 2.0)
        with tempfile.TemporaryDirectory() as tempdir:
            filename = os.path.join(tempdir, "region.svg")
            plot.write_svg(filename, region.snapshot())
            with open(filename, "r", encoding="utf-8") as stream:
                content = stream.read()
        self.assertTrue(content.startswith("<svg"))
        self.assertTrue(content.endswith("</svg>\n"))
