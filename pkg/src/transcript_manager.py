"""On-disk game transcripts (line-delimited JSON) and key=value summaries, written crash-safe."""
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Mapping

from .types import GameEvent

logger = logging.getLogger(__name__)


def _atomic_write(path: Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8") as f:
        f.write(content)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)


def render_transcript(events: List[GameEvent]) -> str:
    """One canonical JSON object per line (sorted keys, no spaces)."""
    return "".join(json.dumps(e.to_dict(), sort_keys=True, separators=(",", ":")) + "\n" for e in events)


def render_summary(summary: Mapping[str, Any]) -> str:
    return "".join(f"{key}={value}\n" for key, value in summary.items())


def parse_summary(text: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for line in text.splitlines():
        if "=" in line:
            key, value = line.split("=", 1)
            out[key] = value
    return out


class TranscriptManager:
    """One transcript file and one summary file per game under a base directory."""

    def __init__(self, base_dir: str) -> None:
        self._base = Path(base_dir)

    def transcript_path(self, game_id: str) -> Path:
        return self._base / f"game_{game_id}.jsonl"

    def summary_path(self, game_id: str) -> Path:
        return self._base / f"game_{game_id}.summary"

    def write_transcript(self, game_id: str, events: List[GameEvent]) -> Path:
        path = self.transcript_path(game_id)
        _atomic_write(path, render_transcript(events))
        logger.debug("wrote %d events to %s", len(events), path)
        return path

    def write_summary(self, game_id: str, summary: Mapping[str, Any]) -> Path:
        path = self.summary_path(game_id)
        _atomic_write(path, render_summary(summary))
        return path

    def read_transcript(self, game_id: str) -> List[GameEvent]:
        path = self.transcript_path(game_id)
        if not path.exists():
            return []
        events: List[GameEvent] = []
        with open(path, "r", encoding="utf-8") as f:
            for line in f:
                if not line.strip():
                    continue
                try:
                    events.append(GameEvent.from_dict(json.loads(line)))
                except (json.JSONDecodeError, KeyError):
                    logger.warning("skipping unreadable transcript line in %s", path)
        return events

    def read_summary(self, game_id: str) -> Dict[str, str]:
        path = self.summary_path(game_id)
        if not path.exists():
            return {}
        return parse_summary(path.read_text(encoding="utf-8"))

    def recover_from_crash(self) -> int:
        """Remove temp files left behind by an interrupted write; return how many."""
        removed = 0
        if not self._base.exists():
            return removed
        for f in self._base.glob("*.tmp"):
            try:
                f.unlink()
                removed += 1
            except OSError:
                pass
        return removed
