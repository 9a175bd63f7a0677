import random
from concurrent.futures import ThreadPoolExecutor

import pytest
from hypothesis import given, strategies as st

from binate.fixtures import symmetric, z2_with_name
from binate.handles import FiniteHandle
from binate.hnn import (
    HnnWord,
    ReductionBudgetExceeded,
    ReductionDepthError,
    britton_reduce,
    element_order_bounded,
    equal,
    is_trivial,
)
from binate.presentation import abelianization
from binate.suites import britton_oracle
from binate.tower import (
    TowerDepthExceeded,
    abelian_witness,
    build_binate_tower,
    tower_level_presentation,
    tower_report,
    verify_binate,
    verify_pairwise_structure,
)

Z2, NAMES = z2_with_name()
G_ = NAMES["g"]
E_ = Z2.identity


@pytest.fixture(scope="module")
def z2_tower():
    return build_binate_tower(FiniteHandle(Z2, NAMES), 2)


@pytest.fixture(scope="module")
def s3_tower():
    return build_binate_tower(symmetric(3), 2)


def test_relator_reduces(z2_tower):
    H1 = z2_tower.levels[0]
    w = H1.parse("u0 (1,g) u0'")
    r = britton_reduce(H1, w)
    assert not r.letters and r.bases[0] == (G_, G_)
    assert H1.format(r) == "(g,g)"


def test_cancelling_letters(z2_tower):
    H1 = z2_tower.levels[0]
    u = H1.letter("u0")
    assert is_trivial(H1, H1.mul(u, H1.inv(u)))
    assert equal(H1, u, u)
    assert not is_trivial(H1, u)


def test_binate_equation_by_hand(z2_tower):
    H1 = z2_tower.levels[0]
    c = H1.commutator(H1.letter(0), H1.embed((E_, G_)))
    assert H1.format(c) == "(g,1)"


@pytest.mark.parametrize("n", [1, 2, 3, 7, -1, -4])
def test_stable_letter_powers_nontrivial(z2_tower, n):
    H2 = z2_tower.levels[1]
    assert not is_trivial(H2, H2.power(H2.letter(0), n))


def test_reduced_output_has_no_pinches(z2_tower):
    H1 = z2_tower.levels[0]
    rng = random.Random(3)
    base = [(a, b) for a in (E_, G_) for b in (E_, G_)]
    for _ in range(300):
        m = rng.randint(0, 6)
        w = HnnWord(tuple(rng.choice(base) for _ in range(m + 1)),
                    tuple((0, rng.choice((1, -1))) for _ in range(m)))
        r = H1.reduce(w)
        assert H1.is_reduced(r)
        assert H1.equal(r, w)


def _level1_words():
    base = [(a, b) for a in (E_, G_) for b in (E_, G_)]
    syl = st.sampled_from(base)
    return st.integers(0, 4).flatmap(
        lambda m: st.tuples(st.tuples(*[syl] * (m + 1)), st.tuples(*[st.sampled_from([1, -1])] * m))
    ).map(lambda t: HnnWord(t[0], tuple((0, e) for e in t[1])))


@given(_level1_words(), _level1_words(), _level1_words())
def test_level1_group_axioms(a, b, c):
    H1 = build_binate_tower(Z2, 1).levels[0]
    assert H1.equal(H1.mul(H1.mul(a, b), c), H1.mul(a, H1.mul(b, c)))
    assert H1.is_identity(H1.mul(a, H1.inv(a)))


def test_britton_against_finite_quotients():
    r = britton_oracle(max_letters=4)
    assert r["words"] == sum(4 ** (m + 1) * 2 ** m for m in range(5))
    assert r["unwitnessed_nontrivial"] == []
    assert r["trivial_but_nonzero_image"] == []
    assert r["ok"]


@pytest.mark.parametrize("fixture", ["z2_tower", "s3_tower"])
def test_tower_reports(fixture, request):
    T = request.getfixturevalue(fixture)
    rep = tower_report(T)
    assert rep["scope"] == "level-n facts"
    assert all(c["verdict"] == "pass" for c in rep["checks"])
    gens = T.base.generators()
    assert all(c["verdict"] == "pass" for c in verify_pairwise_structure(T, 0, 1, gens)["checks"])


def test_binate_equation_every_base_element(s3_tower):
    for h in s3_tower.base_elements():
        assert verify_binate(s3_tower, 0, h)
        assert verify_binate(s3_tower, 1, s3_tower.include(h, 0, 1))


def test_abelian_witness(z2_tower, s3_tower):
    w = abelian_witness(z2_tower, G_, 2, 2)
    assert all(c["verdict"] == "pass" for c in w["checks"])
    # a_i has order 2 here, so a_0^m = a_1^n only for m, n both even, both sides trivial
    assert w["relations_found"] and all(r["trivial"] for r in w["relations_found"])
    c3 = next(x for x in s3_tower.base_elements() if x.order() == 3)
    w = abelian_witness(s3_tower, c3, 2, 3)
    assert all(c["verdict"] == "pass" for c in w["checks"])
    single = abelian_witness(z2_tower, G_, 1, 3)
    assert single["relations_found"] == []


def test_construction_errors():
    with pytest.raises(ValueError):
        build_binate_tower(Z2, 0)
    with pytest.raises(TowerDepthExceeded):
        build_binate_tower(Z2, 4)
    with pytest.raises(ValueError):
        build_binate_tower(symmetric(1), 1)
    T = build_binate_tower(Z2, 1)
    with pytest.raises(ValueError):
        verify_pairwise_structure(T, 0, 1)
    with pytest.raises(ValueError):
        abelian_witness(T, E_, 1, 2)


def test_letter_budget():
    T = build_binate_tower(Z2, 1, letter_budget=3)
    H1 = T.levels[0]
    with pytest.raises(ReductionBudgetExceeded):
        H1.power(H1.letter(0), 5)


def test_nesting_cap():
    T = build_binate_tower(Z2, 2)
    H1, H2 = T.levels
    x = H2.mul(H2.letter(0), T.phi(1, T.u(0)))
    assert not H2.is_identity(H2.commutator(x, H2.letter(0)))
    # membership tests of H2 recurse into H1's word problem
    H1.nesting_cap = 1
    with pytest.raises(ReductionDepthError):
        H2.is_identity(H2.commutator(x, H2.letter(0)))


def test_format_parse_round_trip(z2_tower):
    H2 = z2_tower.levels[1]
    for text in ["u1 (u0,1)", "u1 ((g,1),u0 (1,g)) u1'", "1"]:
        w = H2.parse(text)
        assert H2.equal(H2.parse(H2.format(w)), w)
    with pytest.raises(ValueError):
        H2.parse("v3")


def test_element_order_bounded(z2_tower):
    H1 = z2_tower.levels[0]
    assert element_order_bounded(H1, H1.identity, 5) == 1
    assert element_order_bounded(H1, H1.embed((G_, E_)), 5) == 2
    assert element_order_bounded(H1, H1.letter(0), 50) is None


def test_concurrent_reductions_agree(s3_tower):
    H2 = s3_tower.levels[1]
    words = [s3_tower.phi(1, s3_tower.include(h, 0, 1)) for h in s3_tower.base_elements()]
    u = H2.letter(0)

    def job(w):
        return H2.is_identity(H2.commutator(u, w))

    serial = [job(w) for w in words]
    with ThreadPoolExecutor(4) as pool:
        assert list(pool.map(job, words)) == serial


@pytest.mark.parametrize("H0,ab", [(Z2, "Z/2"), (symmetric(3), "Z/2")])
def test_level_presentation_abelianization(H0, ab):
    # H_1 of level i is H_0^ab + Z^i: the stable letters survive, the 1 x H factor does too
    assert str(abelianization(tower_level_presentation(H0, 0))) == ab
    assert str(abelianization(tower_level_presentation(H0, 1))) == f"{ab} + Z"
    assert str(abelianization(tower_level_presentation(Z2, 2))) == "Z/2 + Z^2"
