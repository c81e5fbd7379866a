"""Annotation providers, merging, and persistence."""

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest
from hypothesis import given
from hypothesis import strategies as st

from domcred.annotate import (
    AnnotatorError,
    DomainAnnotation,
    LexiconAnnotator,
    RemoteAnnotator,
    annotate_dataset,
    load_annotations,
    merge_domains,
    save_annotations,
)
from domcred.lexicon import parse_domain_lexicon, parse_sentiment_lexicon

from helpers import make_dataset, make_reply, make_tweet, make_user

TECH = "Technology and Computing"


def small_annotator(min_hits=2, gain=1.0):
    domains = parse_domain_lexicon(
        "[Tech]\npython\nserver\ncode\n[Food]\npizza\npasta\n[News]\nheadline\n"
    )
    sentiment = parse_sentiment_lexicon("great\t+1\nbad\t-1\n")
    return LexiconAnnotator(domains, sentiment, gain=gain, min_hits=min_hits)


class TestDomainAnnotation:
    def test_score_bounds_enforced(self):
        with pytest.raises(ValueError, match="outside"):
            DomainAnnotation(label="Tech", score=1.5)
        with pytest.raises(ValueError):
            DomainAnnotation(label="Tech", score=-0.1)


class TestLexiconAnnotator:
    def test_top_domain_scores_one(self):
        ann = small_annotator()
        result = ann.infer_taxonomy("python server code pizza")
        assert result[0] == DomainAnnotation("Tech", 1.0, confident=True)
        assert result[1].label == "Food"
        assert result[1].score == pytest.approx(1 / 3)

    def test_confidence_needs_min_hits(self):
        ann = small_annotator(min_hits=2)
        (only,) = ann.infer_taxonomy("pizza tonight")
        assert only.label == "Food" and not only.confident
        (only,) = ann.infer_taxonomy("pizza pasta tonight")
        assert only.confident

    def test_truncates_to_three(self):
        domains = parse_domain_lexicon(
            "[A]\naa\n[B]\nbb\n[C]\ncc\n[D]\ndd\n"
        )
        sentiment = parse_sentiment_lexicon("great\t+1\n")
        ann = LexiconAnnotator(domains, sentiment)
        result = ann.infer_taxonomy("aa aa aa bb bb cc dd")
        assert [d.label for d in result] == ["A", "B", "C"]

    def test_no_hits_empty(self):
        assert small_annotator().infer_taxonomy("nothing to see") == ()

    def test_ties_break_by_label(self):
        ann = small_annotator()
        result = ann.infer_taxonomy("python pizza")
        assert [d.label for d in result] == ["Food", "Tech"]

    def test_sentiment_uses_gain(self):
        ann = small_annotator(gain=2.0)
        assert ann.score_sentiment("great day") == pytest.approx(1.0)

    def test_rejects_bad_settings(self):
        with pytest.raises(ValueError, match="gain"):
            small_annotator(gain=0.0)
        with pytest.raises(ValueError, match="min_hits"):
            small_annotator(min_hits=0)


class TestMergeDomains:
    def test_shared_label_averages_and_ors_confidence(self):
        text = (DomainAnnotation("Tech", 1.0, confident=True),)
        url = (DomainAnnotation("Tech", 0.5, confident=False),)
        (merged,) = merge_domains(text, url)
        assert merged.score == pytest.approx(0.75)
        assert merged.confident

    def test_one_sided_labels_pass_through(self):
        text = (DomainAnnotation("Tech", 0.4),)
        url = (DomainAnnotation("Food", 0.9),)
        merged = merge_domains(text, url)
        assert [d.label for d in merged] == ["Food", "Tech"]

    def test_empty_side_is_identity(self):
        text = (DomainAnnotation("Tech", 1.0), DomainAnnotation("Food", 0.2))
        assert merge_domains(text, ()) == text
        assert merge_domains((), text) == text

    def test_truncates_to_three(self):
        text = tuple(DomainAnnotation(f"D{i}", 1.0 - i / 10) for i in range(3))
        url = (DomainAnnotation("D9", 0.05),)
        merged = merge_domains(text, url)
        assert len(merged) == 3
        assert "D9" not in {d.label for d in merged}

    scores = st.floats(min_value=0.0, max_value=1.0)

    @given(
        st.lists(
            st.tuples(st.sampled_from("ABCDE"), scores, st.booleans()),
            max_size=5,
            unique_by=lambda t: t[0],
        ),
        st.lists(
            st.tuples(st.sampled_from("ABCDE"), scores, st.booleans()),
            max_size=5,
            unique_by=lambda t: t[0],
        ),
    )
    def test_commutative(self, left, right):
        a = tuple(DomainAnnotation(*t) for t in left)
        b = tuple(DomainAnnotation(*t) for t in right)
        assert merge_domains(a, b) == merge_domains(b, a)


class FailingAnnotator:
    """Delegates to a lexicon annotator but fails on marked texts."""

    def __init__(self):
        self.inner = small_annotator(min_hits=1)

    def infer_taxonomy(self, text):
        if "poison" in text:
            raise AnnotatorError("marked text")
        return self.inner.infer_taxonomy(text)

    def score_sentiment(self, text):
        if "poison" in text:
            raise AnnotatorError("marked text")
        return self.inner.score_sentiment(text)


class TestAnnotateDataset:
    def dataset(self):
        users = [make_user("u1"), make_user("u2")]
        tweets = [
            make_tweet("t1", "u1", text="python code all day"),
            make_tweet("t2", "u2", text="no domain words here"),
            make_tweet("t3", "u2", text="pizza pasta", urls=("http://x.example/a",)),
        ]
        replies = [
            make_reply("r1", "t1", "u2", text="great work"),
            make_reply("r2", "t1", "u2", text="so so"),
        ]
        return make_dataset(users, tweets, replies)

    def test_annotates_in_dataset_order(self):
        tweets, replies, report = annotate_dataset(self.dataset(), small_annotator())
        assert [t.tweet_id for t in tweets] == ["t1", "t2", "t3"]
        assert [r.reply_id for r in replies] == ["r1", "r2"]
        assert report.n_tweets == 3
        assert report.n_annotatable == 2
        assert report.n_not_annotatable == 1
        assert report.n_neutral_replies == 1

    def test_url_resolver_feeds_url_domains(self):
        tweets, _, _ = annotate_dataset(
            self.dataset(),
            small_annotator(min_hits=1),
            url_text_resolver=lambda url: "server headline",
        )
        t3 = tweets[2]
        assert {d.label for d in t3.url_domains} == {"Tech", "News"}
        assert t3.merged_domains[0].label == "Food"

    def test_without_resolver_urls_ignored(self):
        tweets, _, _ = annotate_dataset(self.dataset(), small_annotator())
        assert tweets[2].url_domains == ()

    def test_failures_recorded_and_neutralized(self):
        users = [make_user("u1")]
        tweets = [make_tweet("t1", "u1", text="poison python")]
        replies = [make_reply("r1", "t1", "u1", text="poison reply")]
        annotated, reps, report = annotate_dataset(
            make_dataset(users, tweets, replies), FailingAnnotator()
        )
        assert annotated[0].merged_domains == ()
        assert reps[0].sentiment == 0.0
        assert [f[0] for f in report.failures] == ["t1", "r1"]

    def test_fail_fast_raises(self):
        users = [make_user("u1")]
        tweets = [make_tweet("t1", "u1", text="poison")]
        with pytest.raises(AnnotatorError):
            annotate_dataset(
                make_dataset(users, tweets), FailingAnnotator(), fail_fast=True
            )

    def test_report_round_trips_to_dict(self):
        _, _, report = annotate_dataset(self.dataset(), small_annotator())
        payload = report.to_dict()
        assert payload["n_tweets"] == 3
        assert payload["n_annotatable"] + payload["n_not_annotatable"] == 3


class TestPersistence:
    def test_round_trip(self, tmp_path):
        tweets, replies, report = annotate_dataset(
            TestAnnotateDataset().dataset(), small_annotator()
        )
        path = tmp_path / "annotations.jsonl"
        save_annotations(tweets, replies, path, report=report)
        loaded_tweets, loaded_replies = load_annotations(path)
        assert loaded_tweets == tweets
        assert loaded_replies == replies

    def test_report_line_optional(self, tmp_path):
        path = tmp_path / "annotations.jsonl"
        save_annotations((), (), path)
        assert load_annotations(path) == ((), ())

    def test_unknown_kind_rejected(self, tmp_path):
        path = tmp_path / "annotations.jsonl"
        path.write_text('{"kind": "mystery"}\n', encoding="utf-8")
        with pytest.raises(ValueError, match="mystery"):
            load_annotations(path)


class _Handler(BaseHTTPRequestHandler):
    payload: dict = {}
    status = 200

    def do_POST(self):
        body = self.rfile.read(int(self.headers["Content-Length"]))
        type(self).last_request = json.loads(body)
        type(self).last_auth = self.headers.get("Authorization")
        response = json.dumps(self.payload).encode("utf-8")
        self.send_response(self.status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(response)))
        self.end_headers()
        self.wfile.write(response)

    def log_message(self, *args):
        pass


@pytest.fixture
def http_service():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}", _Handler
    server.shutdown()


class TestRemoteAnnotator:
    def test_parses_taxonomy(self, http_service):
        url, handler = http_service
        handler.payload = {
            "domains": [
                {"label": "Food", "score": 0.5},
                {"label": "Tech", "score": 1.0, "confident": True},
            ],
            "sentiment": 0.25,
        }
        handler.status = 200
        remote = RemoteAnnotator(url)
        result = remote.infer_taxonomy("anything")
        assert [d.label for d in result] == ["Tech", "Food"]
        assert result[0].confident
        assert remote.score_sentiment("anything") == 0.25
        assert handler.last_request == {"text": "anything"}

    def test_sentiment_clamped(self, http_service):
        url, handler = http_service
        handler.payload = {"sentiment": 7.0}
        assert RemoteAnnotator(url).score_sentiment("x") == 1.0

    def test_token_sent_when_env_set(self, http_service, monkeypatch):
        url, handler = http_service
        handler.payload = {"domains": [], "sentiment": 0.0}
        monkeypatch.setenv("ANNOTATE_TOKEN", "secret")
        RemoteAnnotator(url, token_env="ANNOTATE_TOKEN").score_sentiment("x")
        assert handler.last_auth == "Bearer secret"

    def test_http_error_wrapped(self, http_service):
        url, handler = http_service
        handler.payload = {}
        handler.status = 500
        with pytest.raises(AnnotatorError, match="annotation service failed"):
            RemoteAnnotator(url).score_sentiment("x")
        handler.status = 200

    def test_bad_payload_wrapped(self, http_service):
        url, handler = http_service
        handler.payload = {"domains": [{"score": 0.5}], "sentiment": "not a number"}
        remote = RemoteAnnotator(url)
        with pytest.raises(AnnotatorError, match="bad taxonomy"):
            remote.infer_taxonomy("x")
        with pytest.raises(AnnotatorError, match="bad sentiment"):
            remote.score_sentiment("x")

    def test_unreachable_host_wrapped(self):
        remote = RemoteAnnotator("http://127.0.0.1:1", timeout=0.5)
        with pytest.raises(AnnotatorError):
            remote.score_sentiment("x")
