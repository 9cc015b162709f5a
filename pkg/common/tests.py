import io
import tempfile
from pathlib import Path

from django.test import SimpleTestCase
from rest_framework import serializers

from common.exceptions import ExitCode, InvalidConfig, NumericalError, StateSpaceTooLarge
from common.serializers import CsvRowSerializer, IndexedFloatField, UnboundedFloatField
from common.utils import config_digest, csv_preamble, write_csv


class Row:
    def __init__(self, name, value, pair):
        self.name = name
        self.value = value
        self.pair = pair


class RowSerializer(CsvRowSerializer):
    name = serializers.CharField()
    value = UnboundedFloatField()
    first = IndexedFloatField("pair", 0)
    second = IndexedFloatField("pair", 1)


class UnboundedFloatFieldTest(SimpleTestCase):
    def test_representation(self):
        field = UnboundedFloatField()
        self.assertEqual(field.to_representation(float("inf")), "inf")
        self.assertEqual(field.to_representation(3), "3")
        self.assertEqual(field.to_representation(0.1), "0.1")
        self.assertEqual(field.to_representation(None), "")

    def test_indexed_field_reads_tuple_column(self):
        data = RowSerializer(Row("a", 1.5, (2.0, float("inf")))).data
        self.assertEqual(data["first"], "2.0")
        self.assertEqual(data["second"], "inf")


class WriteCsvTest(SimpleTestCase):
    rows = [Row("a", 0.25, (1, 2)), Row("b", float("inf"), (0.5, 0.0))]

    def test_header_and_rows(self):
        stream = io.StringIO()
        count = write_csv(stream, RowSerializer, self.rows, "capacity = 8\n")
        lines = stream.getvalue().splitlines()

        self.assertEqual(count, 2)
        self.assertEqual(lines[0], csv_preamble("capacity = 8\n"))
        self.assertIn(f"config={config_digest('capacity = 8' + chr(10))}", lines[0])
        self.assertTrue(lines[0].startswith("# schema=1 artifact="))
        self.assertEqual(lines[1], "name,value,first,second")
        self.assertEqual(lines[3], "b,inf,0.5,0.0")

    def test_output_is_byte_stable(self):
        with tempfile.TemporaryDirectory() as tmp:
            first, second = Path(tmp, "a.csv"), Path(tmp, "b.csv")
            write_csv(first, RowSerializer, self.rows, "x")
            write_csv(second, RowSerializer, self.rows, "x")
            self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_digest_tracks_config(self):
        self.assertNotEqual(config_digest("capacity = 8"), config_digest("capacity = 12"))


class ExitCodeTest(SimpleTestCase):
    def test_codes_are_distinct(self):
        self.assertEqual(len(set(ExitCode)), len(ExitCode))
        self.assertEqual(StateSpaceTooLarge.exit_code, ExitCode.RESOURCE)
        self.assertEqual(InvalidConfig.exit_code, ExitCode.VALIDATION)

    def test_numerical_error_keeps_diagnostics(self):
        error = NumericalError("singular", cond=1e17, level=3)
        self.assertEqual(error.diagnostics, {"cond": 1e17, "level": 3})
