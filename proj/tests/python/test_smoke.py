"""Smoke tests for the compiled module: the main operations round-trip
through the bindings with the documented values."""

import math
import os
import tempfile

import pytest

import disana

REPO = os.environ.get("DISANA_REPO_DIR", os.path.join(os.path.dirname(__file__), "..", ".."))


def test_version_present():
    assert disana.__version__


def test_tokenize_hashtags_and_case():
    tokens = disana.tokenize("#Impfpflicht jetzt! Die IMPFUNG wirkt.")
    surfaces = [t.surface for t in tokens]
    assert surfaces == ["impfpflicht", "jetzt", "die", "impfung", "wirkt"]
    assert tokens[0].is_hashtag
    assert not tokens[1].is_hashtag


def test_cosine_values_and_errors():
    assert disana.cosine([1, 0], [1, 0]) == pytest.approx(1.0)
    assert disana.cosine([1, 1, 0], [1, 0, 0]) == pytest.approx(1 / math.sqrt(2))
    with pytest.raises(ValueError):
        disana.cosine([0, 0], [1, 0])


def test_mann_kendall_documented_example():
    r = disana.mann_kendall([1, 2, 3, 4, 5])
    assert r.s == 10
    assert r.direction == "increasing"
    assert abs(r.p - 0.0275) < 1e-3


def test_pelt_planted_step():
    series = [0.0] * 10 + [10.0] * 10
    r = disana.pelt(series, 5.0)
    assert r.change_points == [10]
    assert r.indices[-1] == 20
    assert disana.default_penalty(series) > 0


def test_detect_peaks_spike():
    series = [1.0] * 30 + [40.0]
    peaks = disana.detect_peaks(series, 1.5)
    assert [(i, side) for i, _, side in peaks.peaks] == [(30, "high")]


def test_lexicon_scoring():
    lex = disana.Lexicon.load(os.path.join(REPO, "data", "lexicon_de.tsv"))
    assert lex.score("das war super") == (3, -1)
    assert lex.score("nicht super") == (1, -3)
    assert lex.label("einfach schrecklich") == "negative"


def test_cluster_two_blobs():
    import random

    rng = random.Random(42)
    points = [[rng.gauss(0.0, 0.1), rng.gauss(0.0, 0.1)] for _ in range(15)]
    points += [[rng.gauss(8.0, 0.1), rng.gauss(8.0, 0.1)] for _ in range(15)]
    labels = disana.cluster(points, min_cluster_size=10)
    assert set(labels) == {0, 1}
    assert labels[0] != labels[15]


def test_reduce_dimension():
    points = [[float(i), float(i % 3), 0.5, 1.0] for i in range(1, 12)]
    reduced = disana.reduce(points, 2)
    assert len(reduced) == len(points)
    assert all(len(row) == 2 for row in reduced)


def test_run_pipeline_end_to_end():
    config = os.path.join(REPO, "data", "fixtures", "e2e", "config.json")
    with tempfile.TemporaryDirectory() as out:
        summary = disana.run_pipeline(config, out)
        assert summary["relevant"] > 0
        assert summary["topics"] >= 2
        assert summary["seed_terms"] <= 30
        assert os.path.exists(os.path.join(out, "run_summary.json"))
