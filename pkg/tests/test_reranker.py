import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairuse.chunking import Chunk
from fairuse.errors import InvalidWeightsError
from fairuse.graph import Factor
from fairuse.ranking import compute_authority_scores
from fairuse.reranker import (
    CandidateScore,
    Weights,
    aggregate_text_sim,
    candidates_from_pool,
    expand_citations,
    expansion_weights,
    fuse,
    select_top_k,
)


def candidate(case_id, text_sim, citation, court, opinion_id=None):
    return CandidateScore(
        case_id=case_id,
        opinion_id=opinion_id or f"{case_id}-op",
        text_sim=text_sim,
        citation=citation,
        court=court,
    )


unit_floats = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


# -- weights -------------------------------------------------------------------

def test_weights_valid():
    w = Weights(0.5, 0.3, 0.2)
    assert w.as_tuple() == (0.5, 0.3, 0.2)
    assert Weights.uniform().w_text == pytest.approx(1 / 3)
    assert Weights.text_only().as_tuple() == (1.0, 0.0, 0.0)


def test_weights_sum_must_be_one():
    with pytest.raises(InvalidWeightsError):
        Weights(0.5, 0.5, 0.2)
    with pytest.raises(InvalidWeightsError):
        Weights(0.2, 0.2, 0.2)


def test_weights_range_checked():
    with pytest.raises(InvalidWeightsError):
        Weights(1.2, -0.2, 0.0)
    with pytest.raises(InvalidWeightsError):
        Weights(-0.1, 0.6, 0.5)


# -- fuse ------------------------------------------------------------------------

def test_text_only_degenerates_to_text_ordering():
    rng = random.Random(1)
    candidates = [
        candidate(f"c{i}", rng.random(), rng.random(), rng.random()) for i in range(25)
    ]
    ranked = fuse(candidates, Weights.text_only())
    by_text = sorted(candidates, key=lambda c: (-c.text_sim, -c.citation, c.case_id))
    assert [c.case_id for c in ranked] == [c.case_id for c in by_text]
    for c in ranked:
        assert c.fused == c.text_sim


def test_uniform_weights_worked_example():
    """X=(0.9,0.1,0.2) fuses to 0.4; Y=(0.5,0.8,0.9) to ~0.733 and ranks first."""
    x = candidate("X", 0.9, 0.1, 0.2)
    y = candidate("Y", 0.5, 0.8, 0.9)
    ranked = fuse([x, y], Weights.uniform())
    assert [c.case_id for c in ranked] == ["Y", "X"]
    assert ranked[1].fused == pytest.approx(0.4, abs=1e-12)
    assert ranked[0].fused == pytest.approx(2.2 / 3, abs=1e-12)


def brute_force_fuse(candidates, weights):
    """Independent re-evaluation: same float expression, same tie rule."""
    rescored = [
        (
            weights.w_text * c.text_sim + weights.w_cit * c.citation + weights.w_court * c.court,
            c,
        )
        for c in candidates
    ]
    rescored.sort(key=lambda pair: (-pair[0], -pair[1].citation, pair[1].case_id))
    return rescored


def random_weights(rng: random.Random) -> Weights:
    cuts = sorted((rng.random(), rng.random()))
    w = (cuts[0], cuts[1] - cuts[0], 1.0 - cuts[1])
    return Weights(*w)


def test_fuse_matches_brute_force_recomputation():
    rng = random.Random(99)
    for _ in range(50):
        candidates = [
            candidate(f"c{i}", rng.random(), rng.random(), rng.random())
            for i in range(rng.randint(1, 30))
        ]
        weights = random_weights(rng)
        ranked = fuse(candidates, weights)
        expected = brute_force_fuse(candidates, weights)
        assert [c.case_id for c in ranked] == [c.case_id for _, c in expected]
        for got, (score, _) in zip(ranked, expected):
            assert got.fused == score  # bit-for-bit: same expression


def test_fuse_tie_breaks_citation_then_id():
    a = candidate("b-case", 0.4, 0.9, 0.0)
    b = candidate("a-case", 0.4, 0.9, 0.0)
    c = candidate("z-case", 0.4, 0.2, 0.7)  # same fused under (1,0,0)
    ranked = fuse([a, b, c], Weights.text_only())
    assert [x.case_id for x in ranked] == ["a-case", "b-case", "z-case"]


def test_fuse_rejects_raw_tuple_weights_validation():
    with pytest.raises(InvalidWeightsError):
        fuse([candidate("a", 0.1, 0.1, 0.1)], (0.9, 0.9, 0.9))


@given(
    st.lists(
        st.tuples(unit_floats, unit_floats, unit_floats), min_size=1, max_size=12
    ),
    st.tuples(unit_floats, unit_floats, unit_floats),
)
def test_convexity_bound(rows, raw_weights):
    total = sum(raw_weights)
    if total == 0:
        weights = Weights.uniform()
    else:
        normalized = [value / total for value in raw_weights]
        weights = Weights(
            normalized[0], normalized[1], max(0.0, 1.0 - normalized[0] - normalized[1])
        )
    candidates = [candidate(f"c{i}", *row) for i, row in enumerate(rows)]
    for ranked in fuse(candidates, weights):
        low = min(ranked.text_sim, ranked.citation, ranked.court)
        high = max(ranked.text_sim, ranked.citation, ranked.court)
        assert low - 1e-12 <= ranked.fused <= high + 1e-12
        assert -1e-12 <= ranked.fused <= 1.0 + 1e-12


def test_degenerate_unit_weights_match_components():
    rng = random.Random(5)
    candidates = [candidate(f"c{i}", rng.random(), rng.random(), rng.random()) for i in range(15)]
    for weights, component in (
        (Weights(1.0, 0.0, 0.0), lambda c: c.text_sim),
        (Weights(0.0, 1.0, 0.0), lambda c: c.citation),
        (Weights(0.0, 0.0, 1.0), lambda c: c.court),
    ):
        ranked = fuse(candidates, weights)
        values = [component(c) for c in ranked]
        assert values == sorted(values, reverse=True)


def test_monotone_component_never_lowers_rank():
    rng = random.Random(17)
    for _ in range(20):
        candidates = [
            candidate(f"c{i}", rng.random(), rng.random(), rng.random()) for i in range(10)
        ]
        weights = Weights(0.4, 0.3, 0.3)
        before = [c.case_id for c in fuse(candidates, weights)]
        target = rng.randrange(10)
        bumped = candidates[target]
        bumped = CandidateScore(
            case_id=bumped.case_id,
            opinion_id=bumped.opinion_id,
            text_sim=min(1.0, bumped.text_sim + rng.random() * (1 - bumped.text_sim)),
            citation=bumped.citation,
            court=bumped.court,
        )
        candidates[target] = bumped
        after = [c.case_id for c in fuse(candidates, weights)]
        assert after.index(bumped.case_id) <= before.index(bumped.case_id)


def test_fuse_idempotent():
    rng = random.Random(23)
    candidates = [candidate(f"c{i}", rng.random(), rng.random(), rng.random()) for i in range(8)]
    weights = Weights(0.2, 0.5, 0.3)
    once = fuse(candidates, weights)
    twice = fuse(once, weights)
    assert once == twice


# -- select_top_k ---------------------------------------------------------------

def test_select_top_k_truncates():
    rng = random.Random(3)
    ranked = fuse(
        [candidate(f"c{i}", rng.random(), rng.random(), rng.random()) for i in range(6)],
        Weights.uniform(),
    )
    assert select_top_k(ranked, 100) == list(ranked)
    assert select_top_k(ranked, 1) == [ranked[0]]
    assert ranked[0].fused == max(c.fused for c in ranked)
    with pytest.raises(ValueError):
        select_top_k(ranked, 0)


def test_permuted_input_same_output():
    rng = random.Random(29)
    candidates = [candidate(f"c{i}", rng.random(), rng.random(), rng.random()) for i in range(12)]
    shuffled = candidates[:]
    rng.shuffle(shuffled)
    assert fuse(candidates, Weights.uniform()) == fuse(shuffled, Weights.uniform())


# -- aggregate_text_sim -----------------------------------------------------------

def hits_for(graph, pairs):
    """(passage_id, score) pairs to chunk hits."""
    return [
        (Chunk(f"{passage_id}-k{i}", passage_id, Factor.PURPOSE, "t", 1), score)
        for i, (passage_id, score) in enumerate(pairs)
    ]


def test_aggregate_max_and_witness(graph_abc):
    hits = [
        (Chunk("A-purpose:000", "A-purpose", Factor.PURPOSE, "t", 1), 0.2),
        (Chunk("A-purpose:001", "A-purpose", Factor.PURPOSE, "t", 1), 0.9),
        (Chunk("B-purpose:000", "B-purpose", Factor.PURPOSE, "t", 1), 0.5),
    ]
    best = aggregate_text_sim(hits, graph_abc)
    assert best["A"].score == 0.9
    assert best["A"].best_chunk == "A-purpose:001"
    assert best["A"].opinion_id == "A-op"
    assert best["B"].score == 0.5


def test_aggregate_tie_prefers_lower_chunk_id(graph_abc):
    hits = [
        (Chunk("A-purpose:002", "A-purpose", Factor.PURPOSE, "t", 1), 0.7),
        (Chunk("A-purpose:001", "A-purpose", Factor.PURPOSE, "t", 1), 0.7),
    ]
    best = aggregate_text_sim(hits, graph_abc)
    assert best["A"].best_chunk == "A-purpose:001"


def test_aggregate_matches_group_by_max(landmark_graph):
    rng = random.Random(41)
    passages = [landmark_graph.passage(p) for p in landmark_graph.passage_ids]
    hits = []
    for i, passage in enumerate(passages[:200]):
        hits.append(
            (Chunk(f"{passage.passage_id}:000", passage.passage_id, passage.factor, "t", 1),
             round(rng.random(), 6))
        )
    best = aggregate_text_sim(hits, landmark_graph)
    # oracle: plain dict group-by with max
    expected = {}
    for chunk, score in hits:
        case_id = landmark_graph.case_of_passage(chunk.passage_id).case_id
        expected[case_id] = max(expected.get(case_id, -1.0), score)
    assert {k: v.score for k, v in best.items()} == expected


# -- expansions -------------------------------------------------------------------

def test_expansion_weights_renormalize():
    assert expansion_weights(Weights(0.5, 0.25, 0.25)) == (0.5, 0.5)
    assert expansion_weights(Weights(0.2, 0.8, 0.0)) == (1.0, 0.0)
    assert expansion_weights(Weights.text_only()) == (0.5, 0.5)


def test_expand_citations_zero_n(graph_abc):
    scores = compute_authority_scores(graph_abc)
    top = fuse([candidate("A", 1.0, 0.0, 0.0)], Weights.text_only())
    assert expand_citations(top, graph_abc, scores, 0, Weights.text_only()) == []


def test_expand_citations_single_target(graph_abc):
    scores = compute_authority_scores(graph_abc)
    top = fuse([candidate("C", 1.0, 0.0, 0.0)], Weights.text_only())
    expansions = expand_citations(top, graph_abc, scores, 3, Weights.text_only())
    assert [(e.case_id, e.source_case_id, e.rank) for e in expansions] == [("B", "C", 1)]


def test_expand_citations_excludes_top_k(graph_abc):
    scores = compute_authority_scores(graph_abc)
    top = fuse(
        [candidate("A", 1.0, 0.5, 0.5), candidate("B", 0.9, 0.5, 0.5)], Weights.uniform()
    )
    expansions = expand_citations(top, graph_abc, scores, 5, Weights.uniform())
    assert [e.case_id for e in expansions] == ["C"]


def test_expand_citations_most_authoritative_first(landmark_graph, landmark_records):
    scores = compute_authority_scores(landmark_graph)
    landmark_ids = sorted(
        r["case_id"] for r in landmark_records if r["kind"] == "case" and r["court_id"] == "scotus"
    )
    # pick a non-landmark case that cites both landmarks plus something else
    source = next(
        case_id
        for case_id in landmark_graph.case_ids
        if case_id not in landmark_ids
        and set(landmark_ids) <= set(landmark_graph.cited_cases(case_id))
    )
    top = fuse([candidate(source, 1.0, 0.1, 0.1)], Weights.uniform())
    expansions = expand_citations(top, landmark_graph, scores, 2, Weights.uniform())
    best_landmark = max(landmark_ids, key=lambda cid: scores.citation_rank_scaled[cid])
    assert expansions[0].case_id == best_landmark
    assert all(e.source_case_id == source for e in expansions)


def test_candidates_from_pool_components(graph_abc):
    scores = compute_authority_scores(graph_abc)
    from fairuse.reranker import TextSimAggregate

    pool = {"A": TextSimAggregate(0.8, "A-purpose:000", "A-op")}
    (cand,) = candidates_from_pool(pool, graph_abc, scores)
    assert cand.case_id == "A"
    assert cand.citation == scores.citation_rank_scaled["A"]
    assert cand.court == scores.court_rank_scaled["cand"]
    assert cand.best_chunk == "A-purpose:000"


def test_joint_rescaling_keeps_top_k_under_unit_weight():
    """Min-max rescaling all three component maps jointly leaves the top-k
    set unchanged when exactly one weight is nonzero (monotone transform)."""
    from fairuse.ranking import min_max_scale

    rng = random.Random(61)
    raw = {
        f"c{i}": (rng.uniform(0, 5), rng.uniform(0, 5), rng.uniform(0, 5)) for i in range(20)
    }
    text_scaled = min_max_scale({k: v[0] for k, v in raw.items()})
    cit_scaled = min_max_scale({k: v[1] for k, v in raw.items()})
    court_scaled = min_max_scale({k: v[2] for k, v in raw.items()})
    for weights, pick in (
        (Weights(1.0, 0.0, 0.0), 0),
        (Weights(0.0, 1.0, 0.0), 1),
        (Weights(0.0, 0.0, 1.0), 2),
    ):
        raw_candidates = [candidate(cid, *components) for cid, components in raw.items()]
        scaled_candidates = [
            candidate(cid, text_scaled[cid], cit_scaled[cid], court_scaled[cid]) for cid in raw
        ]
        top_raw = {c.case_id for c in select_top_k(fuse(raw_candidates, weights), 5)}
        top_scaled = {c.case_id for c in select_top_k(fuse(scaled_candidates, weights), 5)}
        assert top_raw == top_scaled
