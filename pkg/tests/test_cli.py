"""CLI behavior: output shapes, exit codes, file side effects."""
import builtins
import json
import os
import xml.etree.ElementTree as ET

import pytest

import zoologic.cli as cli
from zoologic.dataset import build_store, load_dataset_json
from zoologic.reasoner import answer, answer_json

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")
CONF = os.path.join(FIXTURES, "dataset.conf")


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestIngest:
    def test_stdout_programs_have_fact_lines(self, capsys):
        code, out, _ = run(
            ["ingest", "--detections", os.path.join(FIXTURES, "detections.json"),
             "--format", "json", "--images", FIXTURES],
            capsys,
        )
        assert code == 0
        assert "animal(zebra, 3)." in out
        assert "animal_bbox(buffalo, 880.0, 260.0, 1150.0, 560.0)." in out
        assert out.count("% image ") == 3

    def test_out_dir_writes_one_file_per_image(self, capsys, tmp_path):
        code, _, _ = run(
            ["ingest", "--detections", os.path.join(FIXTURES, "detections.json"),
             "--format", "json", "--images", FIXTURES, "--out", str(tmp_path)],
            capsys,
        )
        assert code == 0
        assert sorted(p.name for p in tmp_path.iterdir()) == [
            "pasture.pl", "riverbank.pl", "savanna.pl",
        ]
        text = (tmp_path / "savanna.pl").read_text()
        assert text.startswith("animal_exists(A, C) :- animal(A, C), C >= 1.\n")

    def test_empty_detections_give_rules_only_program(self, capsys, tmp_path):
        doc = {"images": [{"id": "void", "width": 10, "height": 10, "detections": []}]}
        path = tmp_path / "d.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run(
            ["ingest", "--detections", str(path), "--format", "json",
             "--images", str(tmp_path)],
            capsys,
        )
        assert code == 0
        assert "animal_exists(A, C) :- animal(A, C), C >= 1." in out
        assert "animal_bbox" not in out

    def test_bad_path_exits_2(self, capsys):
        code, _, err = run(
            ["ingest", "--detections", "/no/such/file.json", "--format", "json",
             "--images", FIXTURES],
            capsys,
        )
        assert code == 2
        assert "error:" in err

    def test_yolo_without_names_exits_2(self, capsys, tmp_path):
        code, _, err = run(
            ["ingest", "--detections", str(tmp_path), "--format", "yolo",
             "--images", str(tmp_path)],
            capsys,
        )
        assert code == 2
        assert "names" in err


class TestAsk:
    def test_output_byte_equal_to_library(self, capsys):
        code, out, _ = run(
            ["ask", "--dataset", CONF, "--image", "savanna",
             "--question", "Count zebra and buffalo"],
            capsys,
        )
        assert code == 0
        with open(os.path.join(FIXTURES, "detections.json"), "r", encoding="utf-8") as fh:
            store = build_store(load_dataset_json(fh.read()))
        kb = store.get("savanna")
        lib = answer_json(answer(kb, store.parse_question("Count zebra and buffalo")))
        assert out == lib + "\n"

    def test_counting_results(self, capsys):
        _, out, _ = run(
            ["ask", "--dataset", CONF, "--image", "savanna",
             "--question", "Count zebra and buffalo"],
            capsys,
        )
        body = json.loads(out)
        assert body["task"] == "counting"
        assert body["results"] == {"zebra": 3, "buffalo": 1}

    def test_overlay_written_for_location(self, capsys, tmp_path):
        svg_path = tmp_path / "out.svg"
        code, out, _ = run(
            ["ask", "--dataset", CONF, "--image", "savanna",
             "--question", "Locate zebras in the image", "--overlay", str(svg_path)],
            capsys,
        )
        assert code == 0
        rects = ET.parse(svg_path).getroot().findall(".//{*}rect")
        assert len(rects) == len(json.loads(out)["results"]["zebra"])

    def test_overlay_skipped_for_counting(self, capsys, tmp_path):
        svg_path = tmp_path / "out.svg"
        code, _, err = run(
            ["ask", "--dataset", CONF, "--image", "savanna",
             "--question", "How many zebras are there?", "--overlay", str(svg_path)],
            capsys,
        )
        assert code == 0
        assert not svg_path.exists()
        assert "no overlay" in err

    def test_unknown_image_exits_2(self, capsys):
        code, _, _ = run(
            ["ask", "--dataset", CONF, "--image", "moon",
             "--question", "How many zebras are there?"],
            capsys,
        )
        assert code == 2

    def test_unknown_animal_exits_3(self, capsys):
        code, _, err = run(
            ["ask", "--dataset", CONF, "--image", "savanna",
             "--question", "How many unicorns are there?"],
            capsys,
        )
        assert code == 3
        assert "error:" in err

    def test_unroutable_question_exits_3(self, capsys):
        code, _, _ = run(
            ["ask", "--dataset", CONF, "--image", "savanna",
             "--question", "what is the weather"],
            capsys,
        )
        assert code == 3

    def test_bad_config_exits_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.conf"
        bad.write_text("nonsense\n")
        code, _, _ = run(
            ["ask", "--dataset", str(bad), "--image", "savanna",
             "--question", "How many zebras are there?"],
            capsys,
        )
        assert code == 2


def feed_repl(monkeypatch, lines):
    feed = iter(lines)

    def fake_input(prompt=""):
        try:
            return next(feed)
        except StopIteration:
            raise EOFError

    monkeypatch.setattr(builtins, "input", fake_input)


class TestRepl:
    def test_question_after_image_select(self, capsys, monkeypatch):
        feed_repl(monkeypatch, [":image savanna", "How many zebras are there?", ":quit"])
        code, out, _ = run(["repl", "--dataset", CONF], capsys)
        assert code == 0
        assert '"results":{"zebra":3}' in out

    def test_images_listing(self, capsys, monkeypatch):
        feed_repl(monkeypatch, [":images", ":quit"])
        _, out, _ = run(["repl", "--dataset", CONF], capsys)
        assert 'savanna: {"buffalo":1,"zebra":3}' in out

    def test_trace_toggle_prints_steps(self, capsys, monkeypatch):
        feed_repl(
            monkeypatch,
            [":image savanna", ":trace on", "How many zebras are there?", ":quit"],
        )
        _, out, _ = run(["repl", "--dataset", CONF], capsys)
        assert "animal(zebra, C)  =>  success: C=3  [animal(zebra, 3)]" in out

    def test_question_without_selection_prompts(self, capsys, monkeypatch):
        feed_repl(monkeypatch, ["How many zebras are there?", ":quit"])
        _, out, _ = run(["repl", "--dataset", CONF], capsys)
        assert "no image selected" in out

    def test_unknown_meta_command_shows_help(self, capsys, monkeypatch):
        feed_repl(monkeypatch, [":bogus", ":quit"])
        _, out, _ = run(["repl", "--dataset", CONF], capsys)
        assert "commands:" in out

    def test_unanswerable_question_keeps_looping(self, capsys, monkeypatch):
        feed_repl(
            monkeypatch,
            [":image savanna", "what is the weather", "How many cows are there?", ":quit"],
        )
        code, out, _ = run(["repl", "--dataset", CONF], capsys)
        assert code == 0
        assert "cannot answer:" in out
        assert '"results":{"cow":0}' in out

    def test_eof_exits_cleanly(self, capsys, monkeypatch):
        feed_repl(monkeypatch, [":image savanna"])
        code, _, _ = run(["repl", "--dataset", CONF], capsys)
        assert code == 0


class TestEval:
    def test_fixture_file_all_correct(self, capsys):
        code, out, _ = run(
            ["eval", "--dataset", CONF, "--fixtures", os.path.join(FIXTURES, "eval.jsonl")],
            capsys,
        )
        assert code == 0
        assert "counting: 12/12 (100.0%)" in out
        assert "existence: 12/12 (100.0%)" in out
        assert "location: 12/12 (100.0%)" in out

    def test_corrupted_expectation_exits_1(self, capsys, tmp_path):
        bad = tmp_path / "f.jsonl"
        bad.write_text(
            json.dumps(
                {
                    "image_id": "savanna",
                    "question": "How many zebras are there?",
                    "expected": {"task": "counting", "results": {"zebra": 99}},
                }
            )
            + "\n"
        )
        code, out, _ = run(["eval", "--dataset", CONF, "--fixtures", str(bad)], capsys)
        assert code == 1
        assert "MISMATCH savanna" in out
        assert "counting: 0/1 (0.0%)" in out

    def test_empty_fixture_file_exits_2(self, capsys, tmp_path):
        empty = tmp_path / "f.jsonl"
        empty.write_text("")
        code, _, err = run(["eval", "--dataset", CONF, "--fixtures", str(empty)], capsys)
        assert code == 2
        assert "empty" in err

    def test_malformed_fixture_line_exits_2(self, capsys, tmp_path):
        bad = tmp_path / "f.jsonl"
        bad.write_text("{oops\n")
        code, _, _ = run(["eval", "--dataset", CONF, "--fixtures", str(bad)], capsys)
        assert code == 2

    def test_unknown_fixture_image_exits_2(self, capsys, tmp_path):
        bad = tmp_path / "f.jsonl"
        bad.write_text(
            json.dumps({"image_id": "moon", "question": "x", "expected": {}}) + "\n"
        )
        code, _, _ = run(["eval", "--dataset", CONF, "--fixtures", str(bad)], capsys)
        assert code == 2


class TestServe:
    def test_bad_config_exits_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.conf"
        bad.write_text("format = json\n")
        code, _, _ = run(["serve", "--config", str(bad)], capsys)
        assert code == 2

    def test_serve_runs_uvicorn_with_config_address(self, capsys, monkeypatch, tmp_path):
        calls = {}

        def fake_run(app, host, port, log_level):
            calls["host"] = host
            calls["port"] = port

        monkeypatch.setattr(cli.uvicorn, "run", fake_run)
        conf = tmp_path / "ds.conf"
        conf.write_text(
            f"detections = {os.path.join(FIXTURES, 'detections.json')}\n"
            "host = 127.0.0.2\nport = 9999\n"
        )
        code, _, _ = run(["serve", "--config", str(conf)], capsys)
        assert code == 0
        assert calls == {"host": "127.0.0.2", "port": 9999}

    def test_busy_port_exits_2(self, capsys, monkeypatch, tmp_path):
        def fake_run(app, host, port, log_level):
            raise OSError("address already in use")

        monkeypatch.setattr(cli.uvicorn, "run", fake_run)
        conf = tmp_path / "ds.conf"
        conf.write_text(f"detections = {os.path.join(FIXTURES, 'detections.json')}\n")
        code, _, err = run(["serve", "--config", str(conf)], capsys)
        assert code == 2
        assert "cannot bind" in err


class TestParser:
    def test_no_command_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main([])
        assert exc.value.code == 2

    def test_unknown_command_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["dance"])
        assert exc.value.code == 2
