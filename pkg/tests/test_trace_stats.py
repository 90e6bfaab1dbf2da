import unittest

import pandas as pd
from pandas.testing import assert_frame_equal

import config
from solver.trace import TraceEvent
from utils.trace_stats import split_depth_profile, summarize_trace


class TestTraceStats(unittest.TestCase):
    def setUp(self):
        self.events = [
            TraceEvent(config.TRACE_ENQUEUE, 1, "pattern", ()),
            TraceEvent(config.TRACE_ENQUEUE, 2, "flexRigid", ()),
            TraceEvent(config.TRACE_SPLIT_PUSH, 2, "flexRigid", (4,)),
            TraceEvent(config.TRACE_ENQUEUE, 3, "pattern", (4,)),
            TraceEvent(config.TRACE_BACKTRACK, 2, "flexRigid", (4,)),
        ]

    def test_summarize_counts_by_kind_and_category(self):
        expected = pd.DataFrame({
            "kind": ["backtrack", "enqueue", "enqueue", "split-push"],
            "category": ["flexRigid", "flexRigid", "pattern", "flexRigid"],
            "count": [1, 1, 2, 1],
        })
        assert_frame_equal(summarize_trace(self.events), expected)

    def test_summarize_empty_trace(self):
        summary = summarize_trace([])
        self.assertTrue(summary.empty)
        self.assertEqual(list(summary.columns), ["kind", "category", "count"])

    def test_split_depth_profile(self):
        profile = split_depth_profile(self.events)
        # the backtrack retries the open split, it does not close it
        self.assertEqual(list(profile["depth"]), [0, 0, 1, 1, 1])
        self.assertEqual(list(profile["index"]), [0, 1, 2, 3, 4])

    def test_backtrack_closes_exhausted_splits_above_target(self):
        events = [
            TraceEvent(config.TRACE_SPLIT_PUSH, 1, "regular", (3,)),
            TraceEvent(config.TRACE_SPLIT_PUSH, 2, "flexRigid", (3, 5)),
            TraceEvent(config.TRACE_BACKTRACK, None, "flexRigid", (3, 5)),
            TraceEvent(config.TRACE_BACKTRACK, None, "regular", (3,)),
        ]
        self.assertEqual(list(split_depth_profile(events)["depth"]), [1, 2, 2, 1])

    def test_skipped_split_closes_one_level(self):
        events = [
            TraceEvent(config.TRACE_SPLIT_PUSH, 1, "regular", (3,)),
            TraceEvent(config.TRACE_SPLIT_PUSH, 2, "regular", (7,)),
            TraceEvent(config.TRACE_RESOLVE_SKIP, None, "regular", (3,)),
            TraceEvent(config.TRACE_BACKTRACK, None, "regular", (3,)),
        ]
        self.assertEqual(list(split_depth_profile(events)["depth"]), [1, 2, 1, 1])

    def test_depth_never_negative(self):
        events = [TraceEvent(config.TRACE_RESOLVE_SKIP), TraceEvent(config.TRACE_BACKTRACK)]
        self.assertEqual(list(split_depth_profile(events)["depth"]), [0, 0])


if __name__ == "__main__":
    unittest.main()
