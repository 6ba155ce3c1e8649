import pytest

from gramcode.channel import (
    ChannelTrace,
    Splitmix64,
    brute_force_support_count,
    cycle_decomposition,
    inject,
    star_distance,
    star_identification_bound,
    support_readout,
    tan_shallit_count,
    trace_from_json,
    trace_to_json,
    transmit,
)
from gramcode.grams import ChannelBudget, full_gram_set, lex_index, profile, word
from gramcode.graphs import build_graph


def full_profile(x, ell):
    return profile(x, full_gram_set(x.q, ell)).counts


def test_rng_determinism_and_range():
    a, b = Splitmix64(12345), Splitmix64(12345)
    assert [a.next64() for _ in range(5)] == [b.next64() for _ in range(5)]
    rng = Splitmix64(0)
    draws = {rng.below(3) for _ in range(100)}
    assert draws == {0, 1, 2}
    assert Splitmix64(1).sample(5, 5) == [0, 1, 2, 3, 4]
    with pytest.raises(ValueError):
        Splitmix64(1).sample(3, 4)


def test_reference_error_pattern():
    # one synthesis flip at the front, one lost occurrence, two misread grams
    x = word("0110100", 2)
    trace = ChannelTrace(None, ((0, 1),), (4,), ((1, (0, 1)), (2, (1, 1))))
    observed = inject(x, 2, trace)
    assert observed.counts == (1, 2, 0, 2)
    assert observed.total == 5
    assert max(observed.counts) <= 6


def test_inject_empty_trace_is_identity():
    x = word("0110100", 2)
    empty = ChannelTrace(None, (), (), ())
    assert inject(x, 2, empty).counts == full_profile(x, 2)


def test_inject_validation():
    x = word("0101", 2)
    with pytest.raises(ValueError):
        inject(x, 2, ChannelTrace(None, ((0, 0),), (), ()))  # same symbol
    with pytest.raises(ValueError):
        inject(x, 2, ChannelTrace(None, (), (9,), ()))
    with pytest.raises(ValueError):
        inject(x, 2, ChannelTrace(None, (), (), ((5, (1, 1)),)))


def test_transmit_replay_and_determinism():
    x = word("01102201", 3)
    budget = ChannelBudget(2, 1, 2)
    obs1, trace1 = transmit(x, 2, budget, seed=42)
    obs2, trace2 = transmit(x, 2, budget, seed=42)
    assert obs1 == obs2 and trace1 == trace2
    assert inject(x, 2, trace1) == obs1
    # a different seed yields a different trace here (seeds may collide in
    # general; replay identity above is the actual contract)
    _, trace3 = transmit(x, 2, budget, seed=43)
    assert trace3 != trace1


def test_transmit_budget_shapes():
    x = word("0110100110", 2)
    for seed in range(25):
        observed, trace = transmit(x, 3, ChannelBudget(1, 2, 1), seed=seed)
        assert observed.total == (10 - 3 + 1) - 2
        assert len(trace.synthesis) == 1
        assert len(trace.dropped) == 2
        assert len(trace.gram_subs) == 1


def test_transmit_zero_budget():
    x = word("0110100", 2)
    observed, trace = transmit(x, 2, ChannelBudget(), seed=7)
    assert observed.counts == full_profile(x, 2)
    assert trace == ChannelTrace(7, (), (), ())


def test_coverage_only_is_one_sided():
    x = word("001101001101", 2)
    base = full_profile(x, 3)
    for seed in range(20):
        observed, _ = transmit(x, 3, ChannelBudget(t=3), seed=seed)
        diff = [b - o for b, o in zip(base, observed.counts)]
        assert all(d >= 0 for d in diff)
        assert sum(diff) == 3


def test_synthesis_only_l1_bound():
    x = word("001101001101", 2)
    base = full_profile(x, 3)
    for seed in range(20):
        observed, _ = transmit(x, 3, ChannelBudget(s_syn=2), seed=seed)
        l1 = sum(abs(b - o) for b, o in zip(base, observed.counts))
        assert l1 <= 2 * 2 * 3


def test_at_most_mode_and_bad_budgets():
    x = word("0101", 2)
    with pytest.raises(ValueError):
        transmit(x, 2, ChannelBudget(t=2, s_seq=2), seed=1)
    with pytest.raises(ValueError):
        transmit(x, 2, ChannelBudget(s_syn=5), seed=1)
    observed, trace = transmit(x, 2, ChannelBudget(1, 1, 1), seed=9, at_most=True)
    assert len(trace.dropped) <= 1 and len(trace.synthesis) <= 1


def test_whole_gram_mode_changes_gram():
    x = word("0110100", 2)
    for seed in range(10):
        _, trace = transmit(x, 2, ChannelBudget(s_seq=2), seed=seed, whole_gram=True)
        for _idx, gram in trace.gram_subs:
            assert len(gram) == 2


def test_trace_json_round_trip(tmp_path):
    x = word("0110100", 2)
    _, trace = transmit(x, 2, ChannelBudget(1, 1, 2), seed=5)
    back = trace_from_json(trace_to_json(trace))
    assert back == trace
    assert inject(x, 2, back) == inject(x, 2, trace)


def test_support_readout():
    s3 = full_gram_set(2, 3)
    x = word("00000110111100", 2)
    sup = support_readout(profile(x, s3).counts, s3)
    labels = {"".join(map(str, g)) for g in sup}
    assert labels == {"000", "001", "011", "100", "101", "110", "111"}


def test_star_distance():
    x = word("0101", 2)
    assert star_distance(x, x, 2, 2) == 0
    assert star_distance(word("0101", 2), word("1010", 2), 2, 2) == 0
    assert star_distance(word("0000", 2), word("1111", 2), 2, 2) == 2


def test_star_identification_bound_formula():
    assert star_identification_bound(10, 3, 5) == 6
    assert star_identification_bound(9, 4, 1) == 9 - 4 + 1


def test_star_identification_bound_on_greedy_codebook():
    # greedy support-distance-4 codebook over binary words of length 8
    n, ell, d = 8, 3, 4
    words = []
    supports = []
    for v in range(2**n):
        bits = tuple((v >> (n - 1 - i)) & 1 for i in range(n))
        sup = frozenset(bits[i : i + ell] for i in range(n - ell + 1))
        if all(len(sup ^ other) >= d for other in supports):
            supports.append(sup)
            words.append(bits)
    assert len(supports) >= 2
    bound = star_identification_bound(n, ell, d)
    for i in range(len(supports)):
        for j in range(i + 1, len(supports)):
            assert len(supports[i] & supports[j]) < bound


def test_tan_shallit_reference_values():
    assert tan_shallit_count(4, 3) == 15
    assert tan_shallit_count(3, 3) == 8
    assert tan_shallit_count(5, 5) == 32


def test_tan_shallit_matches_brute_force():
    for ell in (3, 4):
        for n in range(ell, 2 * ell):
            assert tan_shallit_count(n, ell) == brute_force_support_count(n, ell)


def test_tan_shallit_range_validation():
    with pytest.raises(ValueError):
        tan_shallit_count(6, 3)
    with pytest.raises(ValueError):
        tan_shallit_count(2, 3)


@pytest.mark.parametrize("q,ell", [(2, 2), (2, 3), (3, 2)])
def test_trail_decomposition(q, ell):
    trails = cycle_decomposition(q, ell)
    graph = build_graph(full_gram_set(q, ell))
    assert len(trails) == q
    assert all(len(tr) == q ** (ell - 1) for tr in trails)
    flat = sorted(a for tr in trails for a in tr)
    assert flat == list(range(q**ell))
    for tr in trails:
        for a, b in zip(tr, tr[1:]):
            assert graph.arc_term[a] == graph.arc_init[b]


def test_trail_decomposition_closed_when_possible():
    graph = build_graph(full_gram_set(2, 3))
    trails = cycle_decomposition(2, 3)
    for tr in trails:
        assert graph.arc_init[tr[0]] == graph.arc_term[tr[-1]]


def test_trail_decomposition_guard():
    with pytest.raises(ValueError):
        cycle_decomposition(4, 4)
