"""Central game state: answered queries, the tags handed out, the event log and the phase."""
from typing import Dict, List, Literal, Optional, Set, Tuple

from .types import EventType, GameEvent, QueryRecord, SchemeName, SignerMode, Signature, Tag

Phase = Literal["setup", "queries", "forgery", "ended"]


class StateStore:
    """Holds and updates one game instance's state."""

    def __init__(self, game_id: str, scheme: SchemeName, mode: SignerMode, query_budget: int) -> None:
        self.game_id = game_id
        self.scheme = scheme
        self.mode = mode
        self.query_budget = query_budget
        self.phase: Phase = "setup"
        self.queries_made = 0
        self._records: List[QueryRecord] = []
        self._by_symbols: Dict[Tuple[bytes, ...], QueryRecord] = {}
        self._events: List[GameEvent] = []

    @property
    def events(self) -> List[GameEvent]:
        return list(self._events)

    @property
    def records(self) -> List[QueryRecord]:
        return list(self._records)

    def set_phase(self, phase: Phase) -> None:
        self.phase = phase

    def log_event(self, event_type: EventType, **payload: object) -> GameEvent:
        event = GameEvent(
            game_id=self.game_id,
            event_id=len(self._events),
            event_type=event_type,
            payload=dict(payload),
        )
        self._events.append(event)
        return event

    def budget_left(self) -> int:
        return self.query_budget - self.queries_made

    def use_query(self) -> bool:
        if self.queries_made >= self.query_budget:
            return False
        self.queries_made += 1
        return True

    def cached(self, symbols: Tuple[bytes, ...]) -> Optional[QueryRecord]:
        return self._by_symbols.get(symbols)

    def add_record(self, symbols: Tuple[bytes, ...], signatures: List[Signature], tag: Optional[Tag] = None) -> QueryRecord:
        record = QueryRecord(query_id=len(self._records), symbols=symbols, signatures=signatures, tag=tag)
        self._records.append(record)
        self._by_symbols.setdefault(symbols, record)
        return record

    def queried_symbols(self) -> Set[bytes]:
        return {s for r in self._records for s in r.symbols}

    def tags(self) -> List[Tag]:
        return [r.tag for r in self._records if r.tag is not None]

    def symbols_for_tag(self, tag: Tag) -> Optional[Set[bytes]]:
        """The data set signed under tag, or None if the tag was never handed out."""
        found: Optional[Set[bytes]] = None
        for r in self._records:
            if r.tag is not None and r.tag == tag:
                found = (found or set()) | set(r.symbols)
        return found
