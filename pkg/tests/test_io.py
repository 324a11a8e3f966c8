"""Tests for rtw.io."""

import json

import pytest

from rtw.constructions import book_construction, c4_f2_colored_construction, p4_construction
from rtw.enumeration import Copy, enumerate_copies
from rtw.extremal import ex_edges, rb_exact
from rtw.graphcore import complete_graph, make_named
from rtw.io import (
    SCHEMA,
    DocumentError,
    colored_from_document,
    colored_to_document,
    dumps,
    emit_document,
    family_to_document,
    load_document,
    outcome_to_dict,
    parse_any,
    parse_document,
    save_document,
)
from rtw.rainbow import CopyFamily


def k3_family():
    copies = enumerate_copies(complete_graph(4), make_named("K3"))[:2]
    return CopyFamily(4, make_named("K3"), tuple(copies))


class TestFamilyDocument:
    def test_emit(self):
        text = emit_document(k3_family())
        assert text.endswith("\n")
        payload = json.loads(text)
        assert payload == {
            "allow_multiplicity": False,
            "copies": [[[0, 1], [0, 2], [1, 2]], [[0, 1], [0, 3], [1, 3]]],
            "n_host": 4,
            "pattern": "Bw",
            "schema": SCHEMA,
        }
        assert text.startswith('{"allow_multiplicity":false,"copies":')

    @pytest.mark.parametrize("report", [p4_construction(7), book_construction(12, 2)])
    def test_emit_parse_emit_is_stable(self, report):
        text = emit_document(report.family)
        assert emit_document(parse_document(text)) == text
        assert parse_document(text).copies == report.family.copies

    def test_multiplicity_round_trip(self):
        c = Copy.of([(0, 1)])
        family = CopyFamily(2, make_named("K2"), (c, c), allow_multiplicity=True)
        parsed = parse_document(emit_document(family))
        assert parsed.allow_multiplicity and len(parsed) == 2

    def test_to_document(self):
        doc = family_to_document(k3_family())
        assert doc.n_host == 4 and doc.pattern == "Bw"
        assert doc.to_dict()["schema"] == SCHEMA


class TestParseErrors:
    @pytest.mark.parametrize(
        "text",
        [
            "not json",
            "[1, 2]",
            '{"n_host": 4, "pattern": "Bw"}',
            '{"schema": "other/9", "n_host": 4, "pattern": "Bw", "copies": []}',
            '{"n_host": 4, "pattern": "B!", "copies": []}',
            '{"n_host": 4, "pattern": "Bw", "copies": [[[0, 1], [1, 2]]]}',
            '{"n_host": 4, "pattern": "Bw", "copies": [[[0, 1, 2]]]}',
            '{"n_host": 4, "pattern": "Bw", "copies": [[[0, 0], [0, 1], [1, 2]]]}',
            '{"n_host": 3, "pattern": "Bw", "copies": [[[0, 1], [0, 3], [1, 3]]]}',
            '{"n_host": 4, "pattern": "Bw", "copies": {"a": 1}}',
            '{"n_host": 4, "pattern": "a", "copies": []}',
            '{"n_host": 4, "pattern": "Bx", "copies": []}',
            '{"n_host": "x", "pattern": "Bw", "copies": []}',
            '{"n_host": null, "pattern": "Bw", "copies": []}',
            '{"n_host": 40, "pattern": "Bw", "copies": []}',
            '{"n_host": 4, "pattern": "Bw", "copies": [[[[0], 1], [0, 2], [1, 2]]]}',
        ],
    )
    def test_rejects(self, text):
        with pytest.raises(DocumentError):
            parse_document(text)

    def test_duplicate_without_multiplicity(self):
        text = dumps(
            {
                "n_host": 3,
                "pattern": "Bw",
                "copies": [[[0, 1], [0, 2], [1, 2]], [[0, 1], [0, 2], [1, 2]]],
            }
        )
        with pytest.raises(DocumentError):
            parse_document(text)


class TestFiles:
    def test_save_and_load(self, tmp_path):
        path = tmp_path / "families" / "p4.json"
        family = p4_construction(6).family
        save_document(family, path)
        assert load_document(path).copies == family.copies
        with pytest.raises(FileExistsError):
            save_document(family, path)
        save_document(family, path, overwrite=True)

    def test_load_missing(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_document(tmp_path / "nope.json")

    def test_load_colored(self, tmp_path):
        g = c4_f2_colored_construction(8)
        path = tmp_path / "c4f2.json"
        path.write_text(dumps(colored_to_document(g)), encoding="utf-8")
        assert load_document(path) == g


class TestParseAny:
    def test_family(self):
        parsed = parse_any(emit_document(k3_family()))
        assert isinstance(parsed, CopyFamily)
        assert parsed.copies == k3_family().copies

    def test_colored(self):
        g = c4_f2_colored_construction(6)
        assert parse_any(dumps(colored_to_document(g))) == g

    @pytest.mark.parametrize(
        "text",
        [
            '{"graph6": 5}',
            '{"graph6": "Bw", "red": 3}',
            '{"graph6": "Bw", "red": [[0, 1, 2]]}',
            '{"graph6": "Bw", "red": [[0, 3]]}',
            '{"schema": "other/9", "graph6": "Bw"}',
        ],
    )
    def test_rejects_colored(self, text):
        with pytest.raises(DocumentError):
            parse_any(text)


class TestPayloads:
    def test_colored_document(self):
        g = c4_f2_colored_construction(6)
        payload = colored_to_document(g)
        assert payload["red"] == [[3, 4]]
        assert len(payload["blue"]) == 9
        assert colored_from_document(payload) == g

    def test_colored_document_rejects_garbage(self):
        with pytest.raises(DocumentError):
            colored_from_document({"red": []})
        with pytest.raises(DocumentError):
            colored_from_document({"graph6": "Bw", "red": [[0, 3]]})

    def test_outcome_payload(self, budget):
        payload = outcome_to_dict(ex_edges(4, make_named("K3"), budget))
        assert payload["value"] == 4
        assert payload["status"] == "optimal"
        assert payload["certificate"]["n"] == 4
        assert len(payload["certificate"]["edges"]) == 4

    def test_family_outcome_payload(self, budget):
        payload = outcome_to_dict(rb_exact(4, make_named("K3"), make_named("K3"), budget))
        assert payload["certificate"]["pattern"] == "Bw"
        assert len(payload["certificate"]["copies"]) == 2
        assert set(payload["stats"]) == {"nodes", "seconds", "prunes", "cutoff"}
