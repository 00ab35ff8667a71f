"""
Tests for JSON document parsing and the output documents.
"""
import json

import numpy as np
import pytest

from polymajorant import least_concave_majorant
from polymajorant.codec import (
    components_document,
    dump_piecewise,
    dump_samples,
    level_document,
    majorant_rows,
    parse_piecewise,
    parse_samples,
    partition_document,
    read_document,
)
from polymajorant.exceptions import InputFormatError
from polymajorant.partition import global_max, refine


class TestPiecewiseDocuments:
    """Tests for the piecewise cubic document."""

    def test_dump_then_parse(self, ten_piece):
        """A dumped function parses back to the same knots and coefficients."""
        parsed = parse_piecewise(json.loads(json.dumps(dump_piecewise(ten_piece))))
        assert parsed.knots == ten_piece.knots
        assert parsed.coefficient_rows() == ten_piece.coefficient_rows()

    def test_missing_pieces(self):
        """The missing field is named."""
        with pytest.raises(InputFormatError) as info:
            parse_piecewise({"knots": [0, 1]})
        assert info.value.field == "pieces"

    def test_bad_coefficient(self):
        """A non-numeric coefficient is located by index."""
        with pytest.raises(InputFormatError) as info:
            parse_piecewise({"knots": [0, 1], "pieces": [[1, "x", 0, 0]]})
        assert info.value.field == "pieces[0][1]"

    def test_short_row(self):
        """Rows need four coefficients."""
        with pytest.raises(InputFormatError) as info:
            parse_piecewise({"knots": [0, 1], "pieces": [[1, 0, 0]]})
        assert info.value.field == "pieces[0]"

    def test_piece_count(self):
        """n + 1 knots need n rows."""
        with pytest.raises(InputFormatError):
            parse_piecewise({"knots": [0, 1, 2], "pieces": [[0, 0, 0, 1]]})

    def test_unsorted_knots(self):
        """Structural errors are reported against the knots."""
        with pytest.raises(InputFormatError) as info:
            parse_piecewise({"knots": [0, 2, 1], "pieces": [[0, 0, 0, 1], [0, 0, 0, 1]]})
        assert info.value.field == "knots"

    def test_booleans_are_not_numbers(self):
        """JSON true is refused as a knot."""
        with pytest.raises(InputFormatError):
            parse_piecewise({"knots": [0, True], "pieces": [[0, 0, 0, 1]]})

    def test_read_document_requires_an_object(self, tmp_path):
        """A top-level JSON list is refused."""
        path = tmp_path / "list.json"
        path.write_text("[1, 2]")
        with pytest.raises(InputFormatError) as info:
            read_document(path)
        assert info.value.field == "document"


class TestSampleDocuments:
    """Tests for the samples document used by the spline command."""

    def setup_method(self):
        self.doc = {"nodes": [0.0, 1.0, 2.0], "values": [0.0, 1.0, 8.0], "clamp_left": 0.0}

    def test_flags_override_the_document(self):
        """Explicit clamps win over document keys."""
        prob = parse_samples(self.doc, clamp_left=1.0, clamp_right=12.0)
        assert (prob.d_left, prob.d_right) == (1.0, 12.0)
        assert prob.m4_bound == 0.0

    def test_missing_clamp(self):
        """A clamp absent from both sources is an input error."""
        with pytest.raises(InputFormatError) as info:
            parse_samples(self.doc)
        assert info.value.field == "clamp_right"

    def test_round_trip(self):
        """dump_samples output parses back to the same problem."""
        prob = parse_samples({**self.doc, "clamp_right": 12.0, "g4": 5.0})
        assert parse_samples(dump_samples(prob)) == prob


class TestOutputDocuments:
    """Tests for the result documents."""

    def test_components_document(self, ten_piece):
        """M, C, D and the component list."""
        doc = components_document(least_concave_majorant(ten_piece))
        assert doc["M"] == pytest.approx(3.0)
        assert doc["C"] == pytest.approx([4.0, 8.0])
        assert len(doc["D"]) == 2
        assert len(doc["components"]) == 4

    def test_partition_document_groups(self, ten_piece):
        """Only concave increasing cells carry a group."""
        rp = refine(ten_piece, (0.0, 4.0))
        doc = partition_document(rp, global_max(ten_piece))
        groups = [cell["group"] for cell in doc["cells"] if cell["group"] is not None]
        assert groups == [0, 1, 2]
        assert doc["working"] == [0.0, 4.0]

    def test_level_document_is_quadratic(self, ten_piece):
        """Level pieces are stored as [c2, c1, c0]."""
        doc = level_document(least_concave_majorant(ten_piece))
        assert all(len(piece) == 3 for piece in doc["pieces"])
        assert len(doc["breakpoints"]) == len(doc["pieces"]) + 1

    def test_majorant_rows_include_component_endpoints(self, ten_piece):
        """Sample abscissae contain every component endpoint."""
        result = least_concave_majorant(ten_piece)
        xs = np.asarray([row[0] for row in majorant_rows(result, 11)])
        for alpha, beta in result.components:
            assert alpha in xs and beta in xs
        fhat = np.asarray([row[2] for row in majorant_rows(result, 11)])
        f = np.asarray([row[1] for row in majorant_rows(result, 11)])
        assert np.all(fhat >= f - 1e-9)
