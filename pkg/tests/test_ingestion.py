import io
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from forgetfulness import CorpusRejected, TaggingEvent, bin_usage, parse_events, retag_intervals, write_events
from forgetfulness.ingestion import UNASSIGNED, dumps_events
from forgetfulness.units import DAY, WEEK, parse_instant

T0 = parse_instant("2024-01-01T00:00:00Z")


def parse(text, format="csv"):
    return parse_events(io.StringIO(text), format)


class TestParse:
    def test_empty(self):
        assert parse("") == ([], [])

    def test_single_csv_line(self):
        events, diags = parse("2024-01-01T00:00:00Z,u1,o1,jazz,music\n")
        assert diags == []
        assert events == [TaggingEvent(T0, "u1", "o1", "jazz", "music")]

    def test_header_and_missing_ontology(self):
        events, _ = parse("timestamp,user_id,object_id,tag,ontology_id\n2024-01-01T00:00:00Z,u1,o1,jazz\n")
        assert events[0].ontology_id == UNASSIGNED

    def test_malformed_line_reported(self):
        text = (
            "2024-01-01T00:00:00Z,u1,o1,a,x\n"
            "2024-01-02T00:00:00Z,u1,o1,b,x\n"
            "not-a-time,u1,o1,c,x\n"
            "2024-01-03T00:00:00Z,u1,o1,c,x\n"
        )
        events, diags = parse(text)
        assert [ev.tag for ev in events] == ["a", "b", "c"]
        assert len(diags) == 1 and diags[0].line == 3
        assert str(diags[0]).startswith("line 3: ")

    @pytest.mark.parametrize(
        "line",
        ["2024-01-01T00:00:00Z,u1,o1,   ,x", "2024-01-01T00:00:00Z,u1,o1", "2024-01-01T00:00:00,u1,o1,a"],
    )
    def test_invalid_rows(self, line):
        good = "2024-01-01T00:00:00Z,u1,o1,a\n" * 2
        events, diags = parse(good + line + "\n")
        assert len(events) == 2 and len(diags) == 1

    def test_rejects_wrong_format(self):
        text = '{"timestamp": "2024-01-01T00:00:00Z", "user_id": "u1", "object_id": "o1", "tag": "a"}\n' * 3
        with pytest.raises(CorpusRejected):
            parse(text, "csv")

    def test_half_malformed_is_not_rejected(self):
        events, diags = parse("2024-01-01T00:00:00Z,u1,o1,a\nbad\n")
        assert len(events) == 1 and len(diags) == 1

    def test_jsonl(self):
        text = (
            '{"timestamp": "2024-01-01T00:00:00Z", "user_id": "u1", "object_id": "o1", "tag": "jazz", "ontology_id": "music"}\n'
            '{"timestamp": "2024-01-01T00:00:00Z", "user_id": "u1", "object_id": "o1"}\n'
            '{"timestamp": "2024-01-01T00:00:00Z", "user_id": "u1", "object_id": "o1", "tag": "x"}\n'
        )
        events, diags = parse(text, "jsonl")
        assert events[0] == TaggingEvent(T0, "u1", "o1", "jazz", "music")
        assert events[1].ontology_id == UNASSIGNED
        assert [d.line for d in diags] == [2]

    def test_quoted_csv(self):
        events, _ = parse('2024-01-01T00:00:00Z,"user, one",o1,"rock,roll",music\n')
        assert events[0].user_id == "user, one" and events[0].tag == "rock,roll"


ident = st.text(alphabet="abcxyz019_-, \"", min_size=1, max_size=8).filter(lambda s: s.strip() == s and s)
event_st = st.builds(
    TaggingEvent,
    st.integers(min_value=0, max_value=4_000_000_000_000_000).map(lambda us: us / 1_000_000),
    ident,
    ident,
    ident,
    ident,
)


@given(st.lists(event_st, max_size=20), st.sampled_from(["csv", "jsonl"]))
def test_round_trip(events, fmt):
    once, diags = parse(dumps_events(events, fmt), fmt)
    assert diags == []
    twice, _ = parse(dumps_events(once, fmt), fmt)
    assert twice == once
    assert [ev.timestamp for ev in once] == pytest.approx([ev.timestamp for ev in events], abs=1e-6)


class TestBinUsage:
    span = (0.0, 5 * WEEK)

    def test_no_events(self):
        s = bin_usage([], "u1", "*", WEEK, self.span)
        assert s.counts.tolist() == [0] * 5
        assert s.times.tolist() == [(k + 0.5) * WEEK for k in range(5)]

    def test_singleton(self):
        s = bin_usage([TaggingEvent(2.5 * WEEK, "u1", "o1", "a")], "u1", "*", WEEK, self.span)
        assert s.counts.tolist() == [0, 0, 1, 0, 0]

    def test_hand_tally(self):
        days = [0, 1, 6.99, 8, 9, 20, 21, 22, 34, 34.999]
        events = [TaggingEvent(d * DAY, "u1", "o1", "a") for d in days]
        events += [TaggingEvent(3 * DAY, "u2", "o1", "a"), TaggingEvent(35 * DAY, "u1", "o1", "a")]
        s = bin_usage(events, "u1", "*", WEEK, self.span)
        # [0,7): 0,1,6.99  [7,14): 8,9  [14,21): 20  [21,28): 21,22  [28,35): 34,34.999
        assert s.counts.tolist() == [3, 2, 1, 2, 2]

    def test_scopes(self):
        events = [
            TaggingEvent(1.0, "u1", "o1", "jazz", "music"),
            TaggingEvent(2.0, "u1", "o1", "rock", "music"),
            TaggingEvent(3.0, "u1", "o1", "python", "code"),
        ]
        total = lambda scope: int(bin_usage(events, "u1", scope, 10.0, (0.0, 10.0)).counts.sum())
        assert total("*") == 3
        assert total("jazz") == total("tag:jazz") == 1
        assert total("ontology:music") == 2

    def test_bad_span(self):
        with pytest.raises(ValueError):
            bin_usage([], "u1", "*", WEEK, (5.0, 5.0))

    def test_partial_last_bin(self):
        s = bin_usage([TaggingEvent(9.5, "u1", "o", "a")], "u1", "*", 4.0, (0.0, 10.0))
        assert s.counts.tolist() == [0, 0, 1]
        assert s.origin == 0.0 and s.owner == ("u1", "*")


@given(st.lists(st.floats(min_value=-50, max_value=150), max_size=60), st.floats(min_value=0.5, max_value=40))
def test_bin_total_equals_in_span_count(times, width):
    events = [TaggingEvent(t, "u1", "o1", "a") for t in times]
    s = bin_usage(events, "u1", "*", width, (0.0, 100.0))
    assert int(s.counts.sum()) == sum(0.0 <= t < 100.0 for t in times)
    assert (s.counts >= 0).all()


class TestRetag:
    def test_single_snapshot(self):
        assert retag_intervals([TaggingEvent(0.0, "u1", "o1", "a"), TaggingEvent(0.0, "u1", "o1", "b")]) == []

    def test_changed_tags(self):
        out = retag_intervals([TaggingEvent(0.0, "u1", "o1", "a"), TaggingEvent(86400.0, "u1", "o1", "b")])
        assert [(r.user_id, r.object_id, r.gap) for r in out] == [("u1", "o1", 86400.0)]

    def test_unchanged_tags(self):
        assert retag_intervals([TaggingEvent(0.0, "u1", "o1", "a"), TaggingEvent(100.0, "u1", "o1", "a")]) == []

    def test_snapshot_merge(self):
        events = [
            TaggingEvent(0.0, "u1", "o1", "a"),
            TaggingEvent(0.0, "u1", "o1", "b"),
            TaggingEvent(10.0, "u1", "o1", "b"),
            TaggingEvent(10.0, "u1", "o1", "a"),
            TaggingEvent(25.0, "u1", "o1", "a"),
            TaggingEvent(5.0, "u1", "o2", "a"),
        ]
        assert [r.gap for r in retag_intervals(events)] == [15.0]


@given(st.lists(st.tuples(st.integers(0, 20), st.sampled_from("uv"), st.sampled_from("op"), st.sampled_from("abc")), max_size=40), st.randoms())
def test_retag_permutation_invariant(rows, rnd):
    events = [TaggingEvent(float(t), u, o, tag) for t, u, o, tag in rows]
    shuffled = events[:]
    rnd.shuffle(shuffled)
    out = retag_intervals(events)
    assert retag_intervals(shuffled) == out
    assert all(r.gap > 0 for r in out)
