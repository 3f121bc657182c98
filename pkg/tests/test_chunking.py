import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simpleqe.encoders import StubEncoder
from simpleqe.errors import ValidationError
from simpleqe.qemodel import (
    HeadConfig, build_model, chunk_document, predict_chunks, predict_document, weighted_average,
)

ENC = StubEncoder()


def sentence_of(units, tag="w"):
    # four-letter words are exactly one subword unit each
    return " ".join([(tag * 4)[:4]] * units)


def lengths(chunks):
    return [c.subword_length for c in chunks]


def test_sentence_of_units():
    assert ENC.subword_tokenize(sentence_of(37)).length == 37


def test_under_budget_is_one_chunk():
    chunks = chunk_document([sentence_of(100)] * 4)
    assert len(chunks) == 1 and chunks[0].subword_length == 400
    assert chunks[0].span == (0, 4) and not chunks[0].truncated


def test_three_by_three_hundred():
    chunks = chunk_document([sentence_of(300)] * 3, budget=512)
    assert lengths(chunks) == [300, 300, 300]
    assert [c.span for c in chunks] == [(0, 1), (1, 2), (2, 3)]


def test_oversized_sentence_truncated():
    (chunk,) = chunk_document([sentence_of(600)])
    assert chunk.subword_length == 512 and chunk.truncated


def test_oversized_in_the_middle():
    chunks = chunk_document([sentence_of(10), sentence_of(700), sentence_of(20)], budget=512)
    assert lengths(chunks) == [10, 512, 20]
    assert [c.truncated for c in chunks] == [False, True, False]


def test_exact_budget_fits():
    assert lengths(chunk_document([sentence_of(256)] * 2, budget=512)) == [512]


def test_weighted_average_examples():
    assert weighted_average([300, 100], [2.0, 4.0]) == 2.5
    assert weighted_average([123], [3.7]) == 3.7
    assert weighted_average([5, 9, 2], [1.25] * 3) == 1.25


def test_weighted_average_errors():
    with pytest.raises(ValidationError):
        weighted_average([], [])
    with pytest.raises(ValidationError):
        weighted_average([1, 2], [1.0])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 700), min_size=1, max_size=30), st.integers(1, 600))
def test_chunk_invariants(sizes, budget):
    sents = [sentence_of(n) for n in sizes]
    chunks = chunk_document(sents, budget=budget)
    assert all(c.subword_length <= budget for c in chunks)
    assert chunks[0].start == 0 and chunks[-1].end == len(sents)
    assert all(a.end == b.start for a, b in zip(chunks, chunks[1:]))
    assert all(c.start < c.end for c in chunks)
    if not any(c.truncated for c in chunks):
        assert sum(lengths(chunks)) == sum(sizes)
    for c in chunks:
        if not c.truncated:
            assert c.subword_length == sum(sizes[c.start:c.end])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 600), st.floats(-5, 5)), min_size=1, max_size=10))
def test_weighted_average_bounded(pairs):
    ls, ps = zip(*pairs)
    v = weighted_average(ls, ps)
    assert min(ps) <= v <= max(ps)


def test_predict_document_single_chunk_identity(stub):
    model = build_model(HeadConfig("S1", ("complexity",), dual_encoder=False), stub, seed=0)
    doc = ["A short first sentence.", "And a second one."]
    chunks, preds = predict_chunks(model, doc)
    assert len(chunks) == 1
    assert predict_document(model, doc) == float(preds[0])


def test_predict_document_bounded(stub, synthetic):
    model = build_model(HeadConfig("S1", ("complexity",), dual_encoder=False), stub, seed=1)
    rng = np.random.default_rng(0)
    doc = [synthetic.sentence(int(n)) for n in rng.integers(20, 120, 25)]
    chunks, preds = predict_chunks(model, doc)
    assert len(chunks) > 1
    assert preds.min() <= predict_document(model, doc) <= preds.max()


def test_predict_document_rejects(stub):
    dual = build_model(HeadConfig("M3"), stub)
    with pytest.raises(ValidationError):
        predict_document(dual, ["text"])
    single = build_model(HeadConfig("M3", dual_encoder=False), stub)
    with pytest.raises(ValidationError):
        predict_document(single, [])
