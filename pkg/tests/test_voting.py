from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modelvote.errors import InputError
from modelvote.parsing import ParsedAnswer
from modelvote.voting import (
    EnsembleConfig,
    IncompleteBallotError,
    default_threshold,
    resolve_argmax,
    score_classification,
    self_consistency_aggregate,
    vote_classification,
    vote_identification,
)

from .oracles import exhaustive_classification, exhaustive_identification

MEMBERS = ("m1", "m2", "m3", "m4")
CFG4 = EnsembleConfig(member_ids=MEMBERS)


def ballot(values):
    return dict(zip(MEMBERS, values))


class TestIdentification:
    def test_two_of_four_is_yes(self):
        verdict = vote_identification(ballot(["yes", "yes", "no", "no"]), CFG4)
        assert verdict.decision == "yes"
        assert verdict.yes_votes == 2

    def test_one_of_four_is_no(self):
        verdict = vote_identification(ballot(["yes", "no", "no", "no"]), CFG4)
        assert verdict.decision == "no"

    def test_unanimous_no(self):
        assert vote_identification(ballot(["no"] * 4), CFG4).decision == "no"

    def test_all_16_ballots_match_brute_force(self):
        for combo in itertools.product(["yes", "no"], repeat=4):
            verdict = vote_identification(ballot(combo), CFG4)
            assert verdict.decision == exhaustive_identification(list(combo), 2)
            assert verdict.yes_votes == sum(v == "yes" for v in combo)

    def test_missing_member_is_incomplete_ballot(self):
        with pytest.raises(IncompleteBallotError, match="m4"):
            vote_identification({"m1": "yes", "m2": "no", "m3": "no"}, CFG4)

    def test_unexpected_member_rejected(self):
        votes = ballot(["yes"] * 4)
        votes["intruder"] = "yes"
        with pytest.raises(IncompleteBallotError, match="intruder"):
            vote_identification(votes, CFG4)

    def test_invalid_vote_value(self):
        with pytest.raises(InputError):
            vote_identification(ballot(["yes", "no", "maybe", "no"]), CFG4)

    def test_explicit_threshold_overrides_default(self):
        strict = EnsembleConfig(member_ids=MEMBERS, identification_threshold=4)
        verdict = vote_identification(ballot(["yes", "yes", "yes", "no"]), strict)
        assert verdict.decision == "no"

    @settings(max_examples=80, deadline=None)
    @given(votes=st.lists(st.sampled_from(["yes", "no"]), min_size=4, max_size=4),
           data=st.randoms(use_true_random=False))
    def test_permutation_invariance(self, votes, data):
        base = vote_identification(ballot(votes), CFG4).decision
        shuffled_members = list(MEMBERS)
        data.shuffle(shuffled_members)
        again = vote_identification(dict(zip(shuffled_members, votes)), CFG4).decision
        assert base == again


def test_default_threshold_rule():
    assert default_threshold(1) == 1
    assert default_threshold(2) == 1   # 1-1 tie resolves to yes
    assert default_threshold(3) == 2
    assert default_threshold(4) == 2   # 2-2 tie resolves to yes
    assert default_threshold(5) == 3
    assert default_threshold(6) == 3


LABELS = ("B", "GCA", "GVHD", "COP", "Other")


class TestClassification:
    def test_unanimous(self):
        verdict = vote_classification(ballot(["B"] * 4), CFG4)
        assert verdict.argmax_set == {"B"}

    def test_two_way_tie_keeps_both(self):
        verdict = vote_classification(ballot(["B", "B", "GCA", "GCA"]), CFG4)
        assert verdict.argmax_set == {"B", "GCA"}
        assert score_classification(verdict, "B")

    def test_four_way_tie(self):
        verdict = vote_classification(ballot(["B", "GCA", "COP", "Other"]), CFG4)
        assert verdict.argmax_set == {"B", "GCA", "COP", "Other"}

    def test_all_625_ballots_match_brute_force(self):
        for combo in itertools.product(LABELS, repeat=4):
            verdict = vote_classification(ballot(combo), CFG4)
            assert verdict.argmax_set == exhaustive_classification(list(combo))

    def test_incomplete_ballot(self):
        with pytest.raises(IncompleteBallotError):
            vote_classification({"m1": "B"}, CFG4)

    @settings(max_examples=60, deadline=None)
    @given(
        m=st.integers(1, 5),
        data=st.data(),
    )
    def test_argmax_completeness_up_to_5x5(self, m, data):
        members = tuple(f"b{i}" for i in range(m))
        cfg = EnsembleConfig(member_ids=members)
        votes = data.draw(st.lists(st.sampled_from(LABELS), min_size=m, max_size=m))
        verdict = vote_classification(dict(zip(members, votes)), cfg)
        assert verdict.argmax_set == exhaustive_classification(votes)


class TestScoring:
    def test_exact_hit(self):
        verdict = vote_classification(ballot(["B"] * 4), CFG4)
        assert score_classification(verdict, "B")
        assert not score_classification(verdict, "GCA")

    def test_gold_in_tie_counts_correct(self):
        verdict = vote_classification(ballot(["B", "B", "GCA", "GCA"]), CFG4)
        assert score_classification(verdict, "GCA")

    def test_resolve_argmax_prefers_gold_then_lexicographic(self):
        verdict = vote_classification(ballot(["B", "B", "GCA", "GCA"]), CFG4)
        assert resolve_argmax(verdict, "GCA") == "GCA"
        assert resolve_argmax(verdict, "Other") == "B"


class TestUnanimityAbsorption:
    @pytest.mark.parametrize("value", ["yes", "no"])
    def test_identification(self, value):
        verdict = vote_identification(ballot([value] * 4), CFG4)
        assert verdict.decision == value

    @pytest.mark.parametrize("label", LABELS)
    def test_classification(self, label):
        verdict = vote_classification(ballot([label] * 4), CFG4)
        assert verdict.argmax_set == {label}


def answer(identification, disease):
    return ParsedAnswer(identification=identification, disease_label=disease)


class TestSelfConsistency:
    def test_single_sample_is_verbatim(self):
        ident, cls = self_consistency_aggregate([("m1", answer("no", "GCA"))])
        assert ident.decision == "no"
        assert cls.argmax_set == {"GCA"}

    def test_identification_counts(self):
        samples = [("m1", answer(v, "B")) for v in ("yes", "yes", "no")]
        ident, _ = self_consistency_aggregate(samples, threshold=2)
        assert ident.decision == "yes"
        assert ident.yes_votes == 2

    def test_classification_counts(self):
        samples = [("m1", answer("yes", d)) for d in ("B", "B", "COP")]
        _, cls = self_consistency_aggregate(samples)
        assert cls.argmax_set == {"B"}

    def test_mixed_backends_rejected(self):
        samples = [("m1", answer("yes", "B")), ("m2", answer("yes", "B"))]
        with pytest.raises(InputError, match="mix"):
            self_consistency_aggregate(samples)

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            self_consistency_aggregate([])


class TestEnsembleConfig:
    def test_m_matches_members(self):
        assert CFG4.m == 4

    def test_duplicate_members_rejected(self):
        with pytest.raises(InputError):
            EnsembleConfig(member_ids=("a", "a"))

    def test_threshold_bounds(self):
        with pytest.raises(InputError):
            EnsembleConfig(member_ids=MEMBERS, identification_threshold=5)
        with pytest.raises(InputError):
            EnsembleConfig(member_ids=MEMBERS, identification_threshold=0)

    def test_without_recomputes_default_threshold(self):
        reduced = CFG4.without("m4")
        assert reduced.member_ids == ("m1", "m2", "m3")
        assert reduced.threshold() == 2   # strict majority of three

    def test_without_keeps_explicit_threshold_capped(self):
        strict = EnsembleConfig(member_ids=MEMBERS, identification_threshold=4)
        assert strict.without("m1").threshold() == 3

    def test_without_unknown_member(self):
        with pytest.raises(InputError):
            CFG4.without("nope")
