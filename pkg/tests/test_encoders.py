import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from simpleqe.encoders import (
    EncoderSpec, StubEncoder, cosine, embedding_similarity, make_encoder, pseudo_log_likelihood,
)
from simpleqe.errors import BudgetError, ValidationError
from simpleqe.features import FrequencyTable

texts = st.text(alphabet="abcdefghij .,", min_size=1, max_size=80).filter(lambda t: t.strip(" .,"))


def test_subword_lengths(stub):
    assert stub.subword_tokenize("cat").length == 1
    assert stub.subword_tokenize("").length == 0
    assert stub.subword_tokenize("internationalization").length == math.ceil(20 / 4)


def test_encode_shapes_and_determinism(stub):
    a, b = stub.encode("the cat sleeps"), stub.encode("the cat sleeps")
    assert np.array_equal(a.token_vectors, b.token_vectors) and np.array_equal(a.pooled, b.pooled)
    assert a.token_vectors.shape == (stub.subword_tokenize("the cat sleeps").length, 64)
    assert np.allclose(np.linalg.norm(a.token_vectors, axis=1), 1.0)


def test_single_piece_pooled_equals_token(stub):
    out = stub.encode("cat")
    assert np.array_equal(out.pooled, out.token_vectors[0])


@given(texts)
def test_pooled_is_mean(text):
    out = StubEncoder(seed=1).encode(text)
    assert np.max(np.abs(out.pooled - out.token_vectors.mean(axis=0))) <= 1e-12


@given(texts, st.integers(0, 1000))
def test_equal_seeds_agree(text, seed):
    a, b = StubEncoder(seed=seed).encode(text), StubEncoder(seed=seed).encode(text)
    assert np.array_equal(a.pooled, b.pooled)


def test_budget_error():
    enc = StubEncoder(max_units=3)
    with pytest.raises(BudgetError, match="4"):
        enc.encode("aaaa bbbb cccc dddd")


def test_truncate_fits_budget(stub):
    text = "internationalization is surprisingly hard"
    for budget in range(1, 12):
        cut = stub.truncate(text, budget)
        assert stub.subword_tokenize(cut).length == min(budget, stub.subword_tokenize(text).length)


def test_uniform_mlm():
    V = 8
    enc = StubEncoder(table=FrequencyTable.from_counts({f"w{i}": 1 for i in range(V)}))
    sent = ["w1", "w5", "w2"]
    for pos in range(3):
        assert enc.mlm_log_prob(sent, pos) == pytest.approx(math.log(1 / V), abs=1e-12)
    assert pseudo_log_likelihood(enc, sent) == pytest.approx(math.log(1 / V), abs=1e-12)


def test_mlm_reads_unigram_probability():
    enc = StubEncoder(table=FrequencyTable.from_counts({"a": 2, "b": 1, "c": 1}))
    assert enc.mlm_log_prob(["a"], 0) == pytest.approx(math.log(0.5), abs=1e-12)
    p, q = 0.5, 0.25
    assert [enc.mlm_log_prob(["a", "b"], i) for i in (0, 1)] == \
        pytest.approx([math.log(p), math.log(q)], abs=1e-12)
    assert pseudo_log_likelihood(enc, ["a", "b"]) == pytest.approx((math.log(p) + math.log(q)) / 2)
    assert pseudo_log_likelihood(enc, ["b"]) == enc.mlm_log_prob(["b"], 0)


def test_mlm_position_range(stub):
    with pytest.raises(IndexError):
        stub.mlm_log_prob(["a"], 1)
    with pytest.raises(ValidationError):
        pseudo_log_likelihood(stub, [])


@given(st.permutations(["the", "cat", "sat", "on", "mat"]))
def test_pll_permutation_invariant_on_stub(tokens):
    enc = StubEncoder(table=FrequencyTable.from_counts({"the": 9, "cat": 3, "mat": 2}))
    assert pseudo_log_likelihood(enc, tokens) == pytest.approx(
        pseudo_log_likelihood(enc, ["the", "cat", "sat", "on", "mat"]), abs=1e-12)


def test_similarity_identity_and_orthogonal(stub):
    assert embedding_similarity(stub, "a cat", "a cat") == pytest.approx(1.0, abs=1e-12)
    assert cosine(np.array([1.0, 0.0]), np.array([0.0, 2.0])) == 0.0
    with pytest.raises(ValidationError):
        cosine(np.zeros(2), np.ones(2))


def test_similarity_symmetric_and_bounded():
    rng = np.random.default_rng(0)
    enc = StubEncoder(seed=9)
    words = ["alpha", "beta", "gamma", "delta", "eps", "zeta"]
    for _ in range(100):
        a = " ".join(rng.choice(words, rng.integers(1, 6)))
        b = " ".join(rng.choice(words, rng.integers(1, 6)))
        s = embedding_similarity(enc, a, b)
        assert s == embedding_similarity(enc, b, a)
        assert -1.0 <= s <= 1.0


def test_make_encoder():
    assert isinstance(make_encoder(EncoderSpec()), StubEncoder)
    with pytest.raises(ValidationError):
        make_encoder(EncoderSpec(name="bert-base"))
    with pytest.raises(ValidationError):
        EncoderSpec(dimension=0)
