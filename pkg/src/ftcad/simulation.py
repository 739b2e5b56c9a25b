"""Runtime simulation: PE liveness agents, the system-manager controller
and the reconfiguration loop.

Each processing element sends a hello frame every ``hello_period`` ticks
carrying its one-hot ID; a gracefully failing PE sends zeros instead and
a silent one sends nothing. The manager maintains a status register from
the hellos, ages out bits whose PE has been quiet longer than
``aging_timeout``, and selects the first strategy option fully covered by
the register. Every selection change is broadcast on the bus as a
manager-to-all configuration frame.

Runs are fully deterministic: given the same graph, options, scenario and
seed the emitted trace is byte-identical.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field, replace

from .bus import HELLO_BASE_ID, MANAGER_TO_ALL_ID, Bus, CanFrame, mask_payload, payload_mask
from .errors import ConfigError, UnknownPeError
from .model import DependencyGraph, NodeKind
from .strategy import ReliabilityOptions

#: default agent hello period in ticks
DEFAULT_HELLO_PERIOD = 10

#: default aging timeout: three hello periods
DEFAULT_AGING_TIMEOUT = 30


class Health(enum.Enum):
    HEALTHY = "healthy"
    FAILING_GRACEFULLY = "failing_gracefully"
    SILENT = "silent"


#: scenario/action vocabulary: explicit zero-hellos vs. full silence
ACTION_TO_HEALTH = {
    "fail": Health.FAILING_GRACEFULLY,
    "fail_silent": Health.SILENT,
    "repair": Health.HEALTHY,
}


@dataclass(frozen=True)
class ScenarioEvent:
    tick: int
    node: str
    action: str

    def __post_init__(self):
        if self.action not in ACTION_TO_HEALTH:
            raise ConfigError(f"unknown scenario action {self.action!r}", key=self.node)


@dataclass(frozen=True)
class Scenario:
    """A reproducible run: duration plus timed fault/repair events.
    ``tick_hours`` is bookkeeping only (trace annotation), the engine
    advances in ticks."""

    duration: int
    tick_hours: float = 1.0
    hello_period: int = DEFAULT_HELLO_PERIOD
    aging_timeout: int = DEFAULT_AGING_TIMEOUT
    events: tuple[ScenarioEvent, ...] = ()

    def __post_init__(self):
        if self.duration < 0 or self.hello_period < 1 or self.aging_timeout < 0:
            raise ConfigError("scenario timing fields out of range")
        if list(self.events) != sorted(self.events, key=lambda e: e.tick):
            raise ConfigError("scenario events must be sorted by tick")

    @classmethod
    def from_json(cls, text: str) -> "Scenario":
        doc = json.loads(text)
        events = tuple(
            ScenarioEvent(tick=e["tick"], node=e["node"], action=e["action"])
            for e in doc.get("events", [])
        )
        return cls(
            duration=doc["duration"],
            tick_hours=doc.get("tick_hours", 1.0),
            hello_period=doc.get("hello_period", DEFAULT_HELLO_PERIOD),
            aging_timeout=doc.get("aging_timeout", DEFAULT_AGING_TIMEOUT),
            events=events,
        )

    def to_json(self) -> str:
        doc = {
            "duration": self.duration,
            "tick_hours": self.tick_hours,
            "hello_period": self.hello_period,
            "aging_timeout": self.aging_timeout,
            "events": [{"tick": e.tick, "node": e.node, "action": e.action} for e in self.events],
        }
        return json.dumps(doc, indent=2) + "\n"


@dataclass
class PeAgentState:
    """Liveness agent of one PE. ``phase`` staggers hellos by bit index so
    agents do not permanently starve each other on the bus."""

    key: str
    pe_id: int
    bit: int
    health: Health = Health.HEALTHY
    last_hello: int | None = None
    phase: int = 0


@dataclass(frozen=True)
class ManagerState:
    """Controller state: the status register, the imported options and the
    per-bit freshness map driving the aging rule."""

    options: tuple[int, ...]
    hello_period: int
    aging_timeout: int
    status: int = 0
    active: int | None = None
    last_seen: tuple[tuple[int, int], ...] = ()

    def last_seen_map(self) -> dict[int, int]:
        return dict(self.last_seen)


def manager_select(status: int, options) -> int | None:
    """Smallest option index fully covered by the status register, the
    masking rule the controller applies from the most reliable option
    down; None when nothing matches."""
    for index, option in enumerate(options):
        if status & option == option:
            return index
    return None


def agent_step(agent: PeAgentState, now: int, hello_period: int) -> CanFrame | None:
    """Hello frame due this tick, if any. Healthy agents carry their ID,
    gracefully failing agents carry zeros, silent agents send nothing."""
    if now % hello_period != agent.phase % hello_period:
        return None
    if agent.health is Health.SILENT:
        return None
    payload = mask_payload(agent.pe_id if agent.health is Health.HEALTHY else 0)
    return CanFrame(
        can_id=HELLO_BASE_ID + agent.bit,
        payload=payload,
        sender=agent.key,
        timestamp=now,
    )


def apply_hello(state: ManagerState, frame: CanFrame, now: int, bit_directory) -> ManagerState:
    """Fold one delivered hello into the register.

    A nonzero payload sets its bits and refreshes their freshness; a zero
    payload from a known PE clears that PE's bit immediately (the explicit
    failing-gracefully signal, no aging involved).
    """
    mask = payload_mask(frame.payload)
    last_seen = state.last_seen_map()
    if mask == 0:
        bit = frame.can_id - HELLO_BASE_ID
        if bit not in bit_directory:
            raise UnknownPeError(f"zero hello from unknown PE id {frame.can_id:#x}")
        status = state.status & ~(1 << bit)
        last_seen.pop(bit, None)
    else:
        status = state.status
        bit = 0
        remaining = mask
        while remaining:
            if remaining & 1:
                if bit not in bit_directory:
                    raise UnknownPeError(f"hello payload bit {bit} outside the PE directory")
                status |= 1 << bit
                last_seen[bit] = now
            remaining >>= 1
            bit += 1
    return replace(state, status=status, last_seen=tuple(sorted(last_seen.items())))


def age_status(state: ManagerState, now: int) -> ManagerState:
    """Clear every bit whose PE has been quiet strictly longer than the
    aging timeout (the boundary tick keeps the bit)."""
    status = state.status
    last_seen = state.last_seen_map()
    for bit, seen in list(last_seen.items()):
        if now - seen > state.aging_timeout:
            status &= ~(1 << bit)
            del last_seen[bit]
    if status == state.status:
        return state
    return replace(state, status=status, last_seen=tuple(sorted(last_seen.items())))


# --- trace records ---------------------------------------------------------


@dataclass(frozen=True)
class TraceRecord:
    kind = "record"
    tick: int

    def to_dict(self) -> dict:
        doc = {"kind": self.kind, "tick": self.tick}
        doc.update({k: v for k, v in self.__dict__.items() if k != "tick"})
        return doc


@dataclass(frozen=True)
class HelloSent(TraceRecord):
    kind = "hello_sent"
    node: str
    payload_mask: int


@dataclass(frozen=True)
class HelloMissed(TraceRecord):
    kind = "hello_missed"
    node: str


@dataclass(frozen=True)
class StatusChanged(TraceRecord):
    kind = "status_changed"
    old: int
    new: int


@dataclass(frozen=True)
class SelectionChanged(TraceRecord):
    kind = "selection_changed"
    old: int | None
    new: int | None
    mask: int


@dataclass(frozen=True)
class ConfigBroadcast(TraceRecord):
    kind = "config_broadcast"
    can_id: int
    mask: int


@dataclass(frozen=True)
class SystemDown(TraceRecord):
    kind = "system_down"


@dataclass(frozen=True)
class SystemRestored(TraceRecord):
    kind = "system_restored"


@dataclass
class SimTrace:
    """Ordered trace of one run plus the run's configuration header."""

    meta: dict
    records: list[TraceRecord] = field(default_factory=list)

    def to_jsonl(self) -> str:
        lines = [json.dumps({"kind": "meta", **self.meta}, sort_keys=True)]
        for record in self.records:
            lines.append(json.dumps(record.to_dict(), sort_keys=True))
        return "\n".join(lines) + "\n"

    def selections(self) -> list[SelectionChanged]:
        return [r for r in self.records if isinstance(r, SelectionChanged)]

    def active_sequence(self) -> list[int | None]:
        """Successive active option indices (0-based), including the
        initial selection."""
        return [r.new for r in self.selections()]


class Simulator:
    """Steppable engine shared by one-shot runs and interactive sessions."""

    def __init__(
        self,
        graph: DependencyGraph,
        options: ReliabilityOptions,
        scenario: Scenario,
        seed: int = 0,
    ):
        self.graph = graph
        self.options = options
        self.scenario = scenario
        self.seed = seed
        self.tick = 0
        self._was_down = False

        directory = options.pe_directory
        for pe_id, key in directory.items():
            node = graph.nodes.get(key)
            if node is None or node.kind is not NodeKind.PROCESSING_ELEMENT or node.pe_id != pe_id:
                raise ConfigError(f"options directory entry {pe_id:#x} -> {key!r} does not match the graph", key=key)
        known = set(directory.values())
        for event in scenario.events:
            if event.node not in known:
                raise ConfigError(f"scenario event for unknown PE {event.node!r}", key=event.node)

        self.agents = [
            PeAgentState(
                key=key,
                pe_id=pe_id,
                bit=pe_id.bit_length() - 1,
                phase=(pe_id.bit_length() - 1) % scenario.hello_period,
            )
            for pe_id, key in sorted(directory.items())
        ]
        self._agent_by_key = {agent.key: agent for agent in self.agents}
        self._bit_directory = options.bit_directory()
        self.manager = ManagerState(
            options=tuple(options.options),
            hello_period=scenario.hello_period,
            aging_timeout=scenario.aging_timeout,
        )
        self.bus = Bus()
        self._event_cursor = 0
        self.trace = SimTrace(
            meta={
                "seed": seed,
                "duration": scenario.duration,
                "tick_hours": scenario.tick_hours,
                "hello_period": scenario.hello_period,
                "aging_timeout": scenario.aging_timeout,
                "options": list(options.options),
            }
        )

    # -- fault injection (scenario events and interactive sessions) ---------

    def inject(self, node: str, action: str) -> None:
        agent = self._agent_by_key.get(node)
        if agent is None:
            raise ConfigError(f"no PE agent for node {node!r}", key=node)
        health = ACTION_TO_HEALTH.get(action)
        if health is None:
            raise ConfigError(f"unknown action {action!r}", key=node)
        agent.health = health

    # -- engine --------------------------------------------------------------

    def step(self, ticks: int = 1) -> None:
        for _ in range(ticks):
            self._step_one()

    def _step_one(self) -> None:
        now = self.tick
        events = self.scenario.events
        while self._event_cursor < len(events) and events[self._event_cursor].tick <= now:
            event = events[self._event_cursor]
            self.inject(event.node, event.action)
            self._event_cursor += 1

        for agent in self.agents:
            if now % self.scenario.hello_period != agent.phase:
                continue
            frame = agent_step(agent, now, self.scenario.hello_period)
            if frame is None:
                self.trace.records.append(HelloMissed(tick=now, node=agent.key))
            else:
                agent.last_hello = now
                self.bus.replace(frame)
                self.trace.records.append(
                    HelloSent(tick=now, node=agent.key, payload_mask=payload_mask(frame.payload))
                )

        delivered = self.bus.step(now)
        manager = self.manager
        if (
            delivered is not None
            and HELLO_BASE_ID <= delivered.can_id < HELLO_BASE_ID + 32
        ):
            changed = apply_hello(manager, delivered, now, self._bit_directory)
            if changed.status != manager.status:
                self.trace.records.append(StatusChanged(tick=now, old=manager.status, new=changed.status))
            manager = changed

        aged = age_status(manager, now)
        if aged.status != manager.status:
            self.trace.records.append(StatusChanged(tick=now, old=manager.status, new=aged.status))
        manager = aged

        new_active = manager_select(manager.status, manager.options)
        if new_active != manager.active:
            mask = manager.options[new_active] if new_active is not None else 0
            self.trace.records.append(
                SelectionChanged(tick=now, old=manager.active, new=new_active, mask=mask)
            )
            frame = CanFrame(
                can_id=MANAGER_TO_ALL_ID,
                payload=mask_payload(mask),
                sender="manager",
                timestamp=now,
            )
            self.bus.replace(frame)
            self.trace.records.append(ConfigBroadcast(tick=now, can_id=frame.can_id, mask=mask))
            if new_active is None:
                self._was_down = True
                self.trace.records.append(SystemDown(tick=now))
            elif manager.active is None and self._was_down:
                self.trace.records.append(SystemRestored(tick=now))
            manager = replace(manager, active=new_active)

        self.manager = manager
        self.tick += 1

    def run(self) -> SimTrace:
        self.step(self.scenario.duration - self.tick)
        return self.trace

    # -- inspection ----------------------------------------------------------

    def state(self) -> dict:
        manager = self.manager
        active_mask = manager.options[manager.active] if manager.active is not None else 0
        return {
            "tick": self.tick,
            "status": manager.status,
            "status_hex": f"0x{manager.status:X}",
            "status_bits": format(manager.status, "032b"),
            "active_index": manager.active,
            "active_mask": active_mask,
            "active_mask_hex": f"0x{active_mask:X}",
            "system_up": manager.active is not None,
            "pe_health": {agent.key: agent.health.value for agent in self.agents},
        }


def run_simulation(
    graph: DependencyGraph,
    options: ReliabilityOptions,
    scenario: Scenario,
    seed: int = 0,
) -> SimTrace:
    """One-shot deterministic run of a scenario; see :class:`Simulator`."""
    return Simulator(graph, options, scenario, seed=seed).run()
