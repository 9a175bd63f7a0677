import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from binate.fixtures import symmetric
from binate.handles import ConjugacyUnsupported, FiniteHandle, trivial_handle
from binate.ring import (
    BackendMismatch,
    GroupRingElement,
    Homomorphism,
    IllDefinedHomomorphism,
    NonIntegral,
    NotIdempotent,
    RingMatrix,
    augmentation,
    bass_probe,
    bass_search,
    f2_handle,
    fixture_homomorphisms,
    half_idempotent,
    hs_trace_element,
    hs_trace_matrix,
    kaplansky_trace,
    lambda_member,
    naturality_check,
    parse_ring_element,
    random_element,
    random_idempotent,
    random_invertible,
    standard_f2_idempotents,
    z2_handle,
)
from binate.tower import build_binate_tower
from binate.words import parse_word

Z2 = z2_handle()
F2 = f2_handle()
S3 = FiniteHandle(symmetric(3))
g = Z2.names["g"]
x, y = F2.generators()


def el(B, text):
    return parse_ring_element(B, text)


def test_normalization():
    assert el(Z2, "g + g") == GroupRingElement.of(Z2, g, 2)
    assert GroupRingElement.of(F2, x) * GroupRingElement.of(F2, x.inverse()) == GroupRingElement.one(F2)
    assert (el(Z2, "e + g") * el(Z2, "e - g")).is_zero()
    assert all(c != 0 for _, c in el(Z2, "e + g - g").terms)


def test_backend_mismatch():
    with pytest.raises(BackendMismatch):
        el(Z2, "e") + el(F2, "e")


def test_augmentation_and_kaplansky():
    assert augmentation(el(Z2, "e + 2*g")) == 3
    assert augmentation(GroupRingElement.zero(Z2)) == 0
    assert kaplansky_trace(el(Z2, "e + 3*g")) == 1
    assert kaplansky_trace(half_idempotent(Z2)) == Fraction(1, 2)
    assert kaplansky_trace(GroupRingElement.zero(F2)) == 0


def test_parse_ring_element():
    M = el(F2, "3/2*e - 2*[x, y] + x y^-1")
    assert M.coefficient(F2.identity) == Fraction(3, 2)
    assert M.coefficient(parse_word("x y x^-1 y^-1")) == -2
    assert M.coefficient(parse_word("x y^-1")) == 1
    assert str(el(Z2, "3/2*e + 1*g")) == "3/2*e + 1*g"


def _sampler(B, denominators=(1, 2, 3)):
    return st.integers(0, 2 ** 32).map(lambda s: random_element(random.Random(s), B, denominators=denominators))


@given(_sampler(S3), _sampler(S3), _sampler(S3))
def test_ring_axioms_finite(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert augmentation(a * b) == augmentation(a) * augmentation(b)


@given(_sampler(F2), _sampler(F2))
def test_ring_axioms_free(a, b):
    assert augmentation(a * b) == augmentation(a) * augmentation(b)
    assert (a + b) - b == a


@given(_sampler(S3))
def test_partial_augmentations_partition(M):
    assert hs_trace_element(M).total() == augmentation(M)
    assert hs_trace_element(M).identity_part() == kaplansky_trace(M)


@given(_sampler(F2), _sampler(F2))
def test_hs_kills_additive_commutators(M, N):
    assert hs_trace_element(M * N - N * M).values == ()


def _classes_by_brute_force(M):
    G = M.backend.group
    out = {}
    for h, c in M.terms:
        cls = min(k * h * k.inverse() for k in G)
        out[cls] = out.get(cls, 0) + c
    return {k: v for k, v in out.items() if v}


@given(_sampler(S3))
def test_partial_augmentations_brute_force(M):
    assert hs_trace_element(M).as_dict() == _classes_by_brute_force(M)


def test_hs_examples():
    assert hs_trace_element(GroupRingElement.one(F2)).to_json() == {"[e]": "1"}
    M = GroupRingElement(F2, [(x * y, 1), (x * (x * y) * x.inverse(), 1)])
    assert hs_trace_element(M).to_json() == {"[x y]": "2"}
    assert hs_trace_element(half_idempotent(Z2)).to_json() == {"[e]": "1/2", "[g]": "1/2"}


def test_matrix_traces():
    assert hs_trace_matrix(RingMatrix.identity(F2, 1)).to_json() == {"[e]": "1"}
    P = RingMatrix.diag(Z2, [half_idempotent(Z2), GroupRingElement.zero(Z2)])
    assert hs_trace_matrix(P).to_json() == {"[e]": "1/2", "[g]": "1/2"}
    for Q in standard_f2_idempotents():
        assert hs_trace_matrix(Q).to_json() == {"[e]": "1"}


def test_not_idempotent_witness():
    P = RingMatrix(F2, [[el(F2, "x")]])
    with pytest.raises(NotIdempotent) as info:
        hs_trace_matrix(P)
    assert (info.value.row, info.value.col) == (0, 0)
    assert info.value.entry == el(F2, "x^2 - x")


def test_invertible_pairs():
    rng = random.Random(11)
    for B in (Z2, F2, S3):
        U, Ui = random_invertible(rng, B, 3)
        assert U @ Ui == RingMatrix.identity(B, 3)


@pytest.mark.parametrize("B", [Z2, F2], ids=["Q[Z/2]", "Z[F2]"])
def test_trace_invariances(B):
    rng = random.Random(5)
    for _ in range(25):
        P = random_idempotent(rng, B, 2, terms=2, word_len=2, height=2)
        Q = random_idempotent(rng, B, 1, terms=2, word_len=2, height=2)
        h = hs_trace_matrix(P)
        U, Ui = random_invertible(rng, B, 3, steps=2, terms=2, word_len=2, height=2)
        assert hs_trace_matrix(P.stabilize()) == h
        assert hs_trace_matrix(U @ P.stabilize() @ Ui) == h
        assert hs_trace_matrix(P.block_sum(Q)) == h + hs_trace_matrix(Q)


def test_lambda_membership():
    assert lambda_member(Fraction(1, 2), [1, 2, 3])
    assert not lambda_member(Fraction(1, 5), [1, 2, 3, 6])
    assert lambda_member(Fraction(1, 12), [2, 3])
    assert lambda_member(7, [1])
    with pytest.raises(ValueError):
        lambda_member(Fraction(1, 2), [])


def test_naturality_fixtures():
    results = {a.name: naturality_check(a, M) for a, M in fixture_homomorphisms()}
    assert results == {"F2->Z2": True, "id_F2": True, "Z2->1": True}
    to_z2 = fixture_homomorphisms()[0][0]
    assert hs_trace_element(to_z2.push(el(F2, "x + y"))).to_json() == {"[g]": "2"}
    kill = fixture_homomorphisms()[2][0]
    assert hs_trace_element(kill.push(half_idempotent(Z2))).to_json() == {"[e]": "1"}


def test_ill_defined_homomorphism():
    c3 = FiniteHandle(symmetric(3))
    with pytest.raises(IllDefinedHomomorphism):
        # a transposition cannot go to g and a 3-cycle to g in Z/2
        Homomorphism(c3, Z2, [g, g])


def test_hnn_backend_has_no_hs_trace():
    H1 = build_binate_tower(Z2, 1).levels[0]
    u = H1.letter(0)
    M = GroupRingElement(H1, [(u, 1), (H1.mul(H1.embed((g, g)), u), 2), (u, 1)])
    assert augmentation(M) == 4
    assert len(M.terms) == 2
    with pytest.raises(ConjugacyUnsupported):
        hs_trace_element(M)


def test_bass_probe():
    assert bass_probe(RingMatrix.identity(F2, 2))["off_identity_classes"] == {}
    P = RingMatrix.diag(F2, [GroupRingElement.one(F2), GroupRingElement.zero(F2)])
    assert bass_probe(P)["consistent"]
    with pytest.raises(NonIntegral):
        bass_probe(RingMatrix.diag(Z2, [half_idempotent(Z2)]))


def test_bass_search_over_z2():
    r = bass_search(2, 2)
    assert r["status"] == "consistent"
    assert r["violations"] == []
    assert r["nontrivial"] > 0
    one = bass_search(1, 2)
    # only 0 and 1 are idempotent in Z[Z/2] at this size
    assert one["idempotents"] == 2 and one["status"] == "no nontrivial witnesses found"


def test_trivial_group_ring():
    T = trivial_handle()
    assert hs_trace_element(GroupRingElement.one(T)).to_json() == {"[e]": "1"}
