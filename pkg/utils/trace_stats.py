import pandas as pd

import config

SUMMARY_COLUMNS = ["kind", "category", "count"]
PROFILE_COLUMNS = ["index", "kind", "depth"]


def events_to_frame(events) -> pd.DataFrame:
    """
    Converts solver trace events into a pandas DataFrame.

    :param events: iterable of TraceEvent
    :return: DataFrame with one row per event
    """
    return pd.DataFrame(
        [
            {
                "kind": event.kind,
                "meta": event.meta,
                "category": event.category or "-",
                "deps": len(event.jdeps),
            }
            for event in events
        ],
        columns=["kind", "meta", "category", "deps"],
    )


def summarize_trace(events) -> pd.DataFrame:
    """
    Counts trace events by kind and constraint category.

    :param events: iterable of TraceEvent
    :return: DataFrame with columns kind, category, count sorted by kind then category
    """
    df = events_to_frame(events)
    if df.empty:
        return pd.DataFrame({c: pd.Series(dtype="int64" if c == "count" else "object") for c in SUMMARY_COLUMNS})
    summary = (
        df.groupby(["kind", "category"])
        .size()
        .reset_index(name="count")
        .sort_values(["kind", "category"])
        .reset_index(drop=True)
    )
    return summary


def split_depth_profile(events) -> pd.DataFrame:
    """
    Running case-split depth after each event. A split push opens a level and
    a skipped split closes one. A backtrack re-enters the newest open split it
    depends on, closing the splits above it that ran out of alternatives.

    A split is identified by its own assumption, the newest id in the
    push event's dependencies.

    :param events: iterable of TraceEvent
    :return: DataFrame with columns index, kind, depth
    """
    rows = []
    open_splits = []
    for index, event in enumerate(events):
        if event.kind == config.TRACE_SPLIT_PUSH:
            open_splits.append(max(event.jdeps) if event.jdeps else None)
        elif event.kind == config.TRACE_RESOLVE_SKIP:
            if open_splits:
                open_splits.pop()
        elif event.kind == config.TRACE_BACKTRACK:
            deps = set(event.jdeps)
            while open_splits and open_splits[-1] not in deps:
                open_splits.pop()
        rows.append({"index": index, "kind": event.kind, "depth": len(open_splits)})
    return pd.DataFrame(rows, columns=PROFILE_COLUMNS)
