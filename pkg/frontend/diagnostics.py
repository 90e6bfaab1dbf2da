from dataclasses import dataclass

import config

_COLORS = {
    config.SEVERITY_ERROR: "\033[31m",
    config.SEVERITY_INFO: "\033[36m",
}
_RESET = "\033[0m"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    span: object
    message: str
    trace: tuple = ()  # asserted origins behind the failure
    details: tuple = ()
    splits: int = 0  # case splits the failure depends on
    source: str = ""


def from_error(error, source: str = "", severity: str = config.SEVERITY_ERROR) -> Diagnostic:
    return Diagnostic(
        severity,
        getattr(error, "span", None),
        getattr(error, "message", str(error)),
        tuple(getattr(error, "trace", ())),
        tuple(getattr(error, "details", ())),
        getattr(error, "splits", 0),
        source,
    )


def innermost_origins(origins) -> list:
    """Origins whose span encloses no other origin's span, deduplicated, in source order."""
    located = []
    for origin in origins:
        if origin.span is not None and origin not in located:
            located.append(origin)
    if not located:
        return [o for i, o in enumerate(origins) if o not in origins[:i]]
    inner = [
        o for o in located
        if not any(other.span != o.span and o.span.contains(other.span) for other in located)
    ]
    return sorted(inner, key=lambda o: (o.span.start, o.span.end, o.description))


def _location(d: Diagnostic, origins) -> str:
    span = d.span if d.span is not None else (origins[0].span if origins else None)
    parts = [p for p in (d.source, str(span) if span is not None else "") if p]
    return ":".join(parts) + ": " if parts else ""


def render_diagnostic(d: Diagnostic, color: bool = False) -> str:
    """One summary line, then details, then the innermost asserted origins."""
    origins = innermost_origins(list(d.trace))
    severity = d.severity
    if color:
        severity = f"{_COLORS.get(d.severity, '')}{severity}{_RESET}"
    lines = [f"{_location(d, origins)}{severity}: {d.message}"]
    lines.extend(f"  {line}" for line in d.details)
    for origin in origins:
        where = f"{origin.span}: " if origin.span is not None else ""
        lines.append(f"  {where}{origin.description}")
    if d.splits:
        lines.append(f"  (after {d.splits} case split{'s' if d.splits != 1 else ''})")
    return "\n".join(lines)
