"""Test the modules `feasible_region.report` and `feasible_region.schema`."""

# COMPLETED
import json
import math
import os
import tempfile
import unittest

import jsonschema

from feasible_region import report, schema
from feasible_region.engine.clip_engine import (
    RegionKind,
    RegionSnapshot,
    SnapshotEntry,
    clip_all,
    new_box,
)
from feasible_region.engine.constraint_normalizer import RawConstraint
from feasible_region.engine.rounding_kernel import BINARY32
from feasible_region.engine.vertex_bounds import VertexBox


def clipped(*constraints, fmt=None):
    """Return the square [0, 10] x [0, 10] clipped by (a, b, c) triples."""
    region = new_box(10.0, 10.0) if fmt is None else new_box(10.0, 10.0, fmt)
    return clip_all(region, [RawConstraint(*map(float, abc)) for abc in constraints])


class TestBuildReport(unittest.TestCase):
    """Test the function `build_report`."""

    def test_pentagon(self):
        """Check the report of a pentagon."""
        content = report.build_report(clipped((1, 1, 5)))
        schema.validate_report(content)
        self.assertEqual(content["Kind"], "polygon")
        self.assertEqual(content["Precision"], 64)
        self.assertEqual(len(content["Edges"]), 5)
        self.assertEqual(
            [edge["Octant"] for edge in content["Edges"]], [0, 1, 2, 4, 6]
        )
        self.assertEqual(content["Edges"][1]["N"], (1.0).hex())
        self.assertEqual(content["Edges"][1]["C"], (5.0).hex())
        self.assertEqual(content["Counters"]["Constraints"], 1)
        self.assertEqual(content["Counters"]["Divisions"], 2)
        self.assertEqual(
            sorted(content["Counters"]),
            sorted(
                [
                    "Constraints",
                    "Divisions",
                    "DirectionComparisons",
                    "SideTests",
                    "ExactFallbacks",
                ]
            ),
        )
        # The report is plain JSON
        self.assertEqual(json.loads(json.dumps(content)), content)

    def test_degenerate_regions(self):
        """Check the reports of point, segment and empty regions."""
        point = report.build_report(clipped((1, 1, 20)))
        self.assertEqual(point["Kind"], "point")
        self.assertIsNone(point["Edges"][0]["VertexBox"])
        self.assertIsNotNone(point["Edges"][1]["VertexBox"])
        segment = report.build_report(clipped((1, 0, 10)))
        self.assertEqual(len(segment["Edges"]), 4)
        empty = report.build_report(clipped((1, 0, 11)))
        self.assertEqual(empty["Edges"], [])
        self.assertEqual(report.build_report(clipped(fmt=BINARY32))["Precision"], 32)

    def test_overflowed_bound(self):
        """Check that overflowed vertex bounds are written as inf and read
        back.
        """
        box = VertexBox(-1.0, -2.0, -1.0, math.inf, 2.0, 1.0)
        entries = tuple(SnapshotEntry(octant, 0.0, 0.0, box) for octant in (0, 2, 4))
        snapshot = RegionSnapshot(RegionKind.POLYGON, entries)
        content = report.snapshot_to_dict(snapshot)
        content.update(Precision=64, Counters={})
        self.assertEqual(content["Edges"][0]["VertexBox"]["Or"], "inf")
        self.assertEqual(report.snapshot_from_report(content), snapshot)


class TestSnapshotFromReport(unittest.TestCase):
    """Test the functions `snapshot_from_report` and `load_report`."""

    def test_round_trip(self):
        """Check that reading a report gives back the snapshot of the region."""
        for constraints in (((3, 1, 7), (-1, 7, 2)), ((1, 1, 20),), ((1, 0, 10),)):
            region = clipped(*constraints)
            with tempfile.TemporaryDirectory() as tempdir:
                filename = os.path.join(tempdir, "report.json")
                with open(filename, "w", encoding="utf-8") as stream:
                    json.dump(report.build_report(region), stream)
                snapshot = report.snapshot_from_report(report.load_report(filename))
            self.assertEqual(snapshot, region.snapshot())

    def test_invalid_reports(self):
        """Check that a ReportError exception is raised for invalid reports."""
        content = report.build_report(clipped((1, 1, 5)))
        broken = dict(content, Kind="triangle")
        with self.assertRaises(report.ReportError):
            report.snapshot_from_report(broken)
        broken = dict(content, Kind="point")
        with self.assertRaises(report.ReportError) as context:
            report.snapshot_from_report(broken)
        self.assertIn("must list 2 edges", str(context.exception))
        broken = dict(content, Edges=content["Edges"][:2])
        with self.assertRaises(report.ReportError):
            report.snapshot_from_report(broken)
        broken = dict(content, Edges=[dict(content["Edges"][0], N="0.5")])
        with self.assertRaises(report.ReportError):
            report.snapshot_from_report(broken)

    def test_parallel_edges(self):
        """Check that a ReportError exception is raised when two consecutive
        edges are parallel or an edge is unbounded.
        """
        content = report.build_report(clipped((1, 1, 5)))
        edges = content["Edges"]
        for broken_edges in (
            [edges[0], edges[0]] + edges[2:],
            edges[:-1] + [dict(edges[0])],
        ):
            broken = dict(content, Edges=broken_edges)
            with self.assertRaises(report.ReportError) as context:
                report.snapshot_from_report(broken)
            self.assertIn("parallel", str(context.exception))
        broken = dict(content, Edges=[dict(edges[0], C="inf")] + edges[1:])
        with self.assertRaises(report.ReportError) as context:
            report.snapshot_from_report(broken)
        self.assertIn("infinite", str(context.exception))
        point = report.build_report(clipped((1, 1, 20)))
        broken = dict(point, Edges=[point["Edges"][0]] * 2)
        with self.assertRaises(report.ReportError):
            report.snapshot_from_report(broken)

    def test_invalid_files(self):
        """Check that unreadable and malformed files raise ReportError."""
        with tempfile.TemporaryDirectory() as tempdir:
            filename = os.path.join(tempdir, "report.json")
            with self.assertRaises(report.ReportError):
                report.load_report(filename)
            with open(filename, "w", encoding="utf-8") as stream:
                stream.write("{")
            with self.assertRaises(report.ReportError) as context:
                report.load_report(filename)
        self.assertIn("The region report is invalid", str(context.exception))


class TestSchema(unittest.TestCase):
    """Test the validation of manifests."""

    def test_manifest(self):
        """Check a valid manifest and an invalid case entry."""
        manifest = {
            "Precision": 64,
            "Seed": 1,
            "Beta": 8,
            "Cases": [
                {
                    "Name": "point-0000",
                    "Kind": "point",
                    "ConstraintFile": "point-0000.txt",
                    "Vertices": [[1, 2]],
                }
            ],
        }
        schema.validate_manifest(manifest)
        manifest["Cases"][0]["Vertices"] = [[1, 2, 3]]
        with self.assertRaises(jsonschema.ValidationError):
            schema.validate_manifest(manifest)
