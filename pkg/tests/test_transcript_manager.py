from src.transcript_manager import TranscriptManager, parse_summary, render_summary, render_transcript
from src.types import GameEvent


def _events():
    return [
        GameEvent("abc", 0, "setup", {"scheme": "SH", "query_budget": 2}),
        GameEvent("abc", 1, "verdict", {"kind": "invalid", "won": False}),
    ]


def test_render_transcript_is_canonical():
    text = render_transcript(_events())
    lines = text.splitlines()
    assert len(lines) == 2
    assert lines[0] == '{"event":"setup","event_id":0,"game_id":"abc","payload":{"query_budget":2,"scheme":"SH"}}'


def test_summary_round_trip():
    summary = {"won": 1, "forgery_kind": "type-I"}
    assert parse_summary(render_summary(summary)) == {"won": "1", "forgery_kind": "type-I"}
    assert parse_summary("junk\nkey=a=b\n") == {"key": "a=b"}


def test_write_and_read_back(tmp_path):
    manager = TranscriptManager(str(tmp_path / "runs"))
    path = manager.write_transcript("abc", _events())
    assert path.name == "game_abc.jsonl"
    assert [e.to_dict() for e in manager.read_transcript("abc")] == [e.to_dict() for e in _events()]
    manager.write_summary("abc", {"won": 0})
    assert manager.read_summary("abc") == {"won": "0"}
    assert not list((tmp_path / "runs").glob("*.tmp"))


def test_missing_files_read_empty(tmp_path):
    manager = TranscriptManager(str(tmp_path))
    assert manager.read_transcript("nope") == []
    assert manager.read_summary("nope") == {}


def test_unreadable_lines_are_skipped(tmp_path):
    manager = TranscriptManager(str(tmp_path))
    manager.write_transcript("abc", _events())
    with open(manager.transcript_path("abc"), "a", encoding="utf-8") as f:
        f.write("{not json\n")
    assert len(manager.read_transcript("abc")) == 2


def test_recover_from_crash(tmp_path):
    manager = TranscriptManager(str(tmp_path))
    (tmp_path / "game_x.jsonl.tmp").write_text("partial")
    assert manager.recover_from_crash() == 1
    assert manager.recover_from_crash() == 0
    assert TranscriptManager(str(tmp_path / "absent")).recover_from_crash() == 0
