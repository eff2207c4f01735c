"""Test the module `feasible_region.utils`."""

# COMPLETED
import json
import os
import tempfile
import threading
import unittest
from unittest.mock import patch

from feasible_region import config, utils
from tests import mock
from tests.utils import update_cli


class TestExecMultithread(unittest.TestCase):
    """Test the function `exec_multithread`."""

    def test_exec_multithread_ok(self):
        """Check that the function `exec_multithread` works as expected."""
        input_list = range(10)
        result = []

        def func(value):
            result.append(value)

        utils.exec_multithread(input_list, func, 5)
        self.assertCountEqual(input_list, result)

    def test_exec_multithread_exception(self):
        """Check that exception raised by the threads are propagated to the
        parent thread.
        """

        def func(value):
            raise RuntimeError()

        with self.assertRaises(RuntimeError):
            utils.exec_multithread(range(10), func, 5)

    def test_exec_multithread_thread_names(self):
        """Check that items are processed by named worker threads."""
        names = set()
        lock = threading.Lock()

        def func(value):
            with lock:
                names.add(threading.current_thread().name)

        utils.exec_multithread(range(20), func, 3)
        self.assertTrue(names)
        self.assertTrue(names <= {"worker-0", "worker-1", "worker-2"})

    def test_exec_multithread_empty(self):
        """Check that an empty list of items is accepted."""
        result = []
        utils.exec_multithread([], result.append, 4)
        self.assertEqual(result, [])


class TestWriteOutputJson(unittest.TestCase):
    """Test the function `write_output_json`."""

    def test_write_output_json(self):
        """Check that the dict is written to the output file of the CLI."""
        with tempfile.TemporaryDirectory() as tmpdir:
            output_file = os.path.join(tmpdir, "output.json")
            mock.mock_cli_arguments("clip", output_file)
            utils.write_output_json({"Kind": "empty", "Edges": []}, "a report")
            with open(config.CLI["output_file"], "r", encoding="utf-8") as stream:
                self.assertEqual(json.load(stream), {"Kind": "empty", "Edges": []})

    def test_write_output_json_patched_cli(self):
        """Check that the output file follows patched CLI arguments."""
        with tempfile.TemporaryDirectory() as tmpdir:
            mock.mock_cli_arguments("verify", os.path.join(tmpdir, "output.json"))
            other_file = os.path.join(tmpdir, "summary.json")
            with patch(
                "feasible_region.config.CLI", update_cli({"output_file": other_file})
            ):
                utils.write_output_json({"Passed": True}, "a summary")
            self.assertTrue(os.path.isfile(other_file))
            self.assertFalse(os.path.exists(config.CLI["output_file"]))
