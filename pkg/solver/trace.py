import sys
from dataclasses import dataclass

import config


@dataclass(frozen=True)
class TraceEvent:
    kind: str
    meta: int | None = None
    category: str | None = None
    jdeps: tuple = ()

    def render(self) -> str:
        meta = "-" if self.meta is None else str(self.meta)
        category = self.category or "-"
        deps = ",".join(str(d) for d in self.jdeps)
        return f"EVENT kind={self.kind} meta={meta} cat={category} jdeps=[{deps}]"


def parse_event(line: str) -> TraceEvent:
    """Inverse of ``TraceEvent.render`` for one trace line."""
    if not line.startswith("EVENT "):
        raise ValueError(f"not a trace line: {line!r}")
    fields = dict(part.split("=", 1) for part in line[len("EVENT "):].split(" "))
    kind = fields["kind"]
    if kind not in config.TRACE_EVENT_KINDS:
        raise ValueError(f"unknown trace event kind: {kind}")
    meta = None if fields["meta"] == "-" else int(fields["meta"])
    category = None if fields["cat"] == "-" else fields["cat"]
    inner = fields["jdeps"].strip("[]")
    jdeps = tuple(int(d) for d in inner.split(",")) if inner else ()
    return TraceEvent(kind, meta, category, jdeps)


class TraceRecorder:
    """Collects events in memory; optionally echoes them to a stream."""

    def __init__(self, stream=None):
        self.events = []
        self.stream = stream

    def __call__(self, event: TraceEvent):
        self.events.append(event)
        if self.stream is not None:
            print(event.render(), file=self.stream)

    def of_kind(self, kind: str) -> list:
        return [e for e in self.events if e.kind == kind]

    def clear(self):
        self.events.clear()


def stderr_tracer() -> TraceRecorder:
    return TraceRecorder(stream=sys.stderr)
