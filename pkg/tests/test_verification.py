import pytest

from conftest import make_claim, make_evidence
from factcheck import prompting
from factcheck.model import Reliability, Stance, Verdict
from factcheck.providers import MockCompletionProvider, MockNLIProvider
from factcheck.verification import (
    AggregationWeights,
    LabelMode,
    StanceBackend,
    StanceError,
    StanceJudgement,
    StanceLabelSpace,
    aggregate_verdict,
    classify_stance,
    merge_to_three_labels,
    parse_stance,
    verify_claim,
    verify_claim_full,
)

MUSK_CLAIM = "Elon Musk is the founder, CEO, and chief engineer of SpaceX"
MUSK_EVIDENCE = "Elon Musk is the CEO of SpaceX, Tesla, and Twitter"


class ProviderSuiteStub:
    def __init__(self, completion=None, nli=None):
        self.completion = completion or MockCompletionProvider(default="irrelevant")
        self.nli = nli


def stance_suite(claim, evidence, answer, mode=LabelMode.FOUR_LABEL):
    template = "stance_four_v1" if mode == LabelMode.FOUR_LABEL else "stance_three_v1"
    prompt = prompting.render(template, claim=claim, evidence=evidence)
    return ProviderSuiteStub(MockCompletionProvider.from_pairs([(prompt, answer)]))


class TestMergeToThreeLabels:
    def test_complete_support_merges(self):
        assert merge_to_three_labels("completely-support") == "support"

    def test_partial_support_merges(self):
        assert merge_to_three_labels("partially-support") == "support"

    def test_refute_and_irrelevant_fixed(self):
        assert merge_to_three_labels("refute") == "refute"
        assert merge_to_three_labels("irrelevant") == "irrelevant"

    def test_unknown_label_rejected(self):
        with pytest.raises(ValueError):
            merge_to_three_labels("maybe")


class TestClassifyStance:
    def test_partial_support_example(self):
        suite = stance_suite(MUSK_CLAIM, MUSK_EVIDENCE, "partially support")
        judgement = classify_stance(MUSK_CLAIM, MUSK_EVIDENCE, suite)
        assert judgement.label == Stance.PARTIALLY_SUPPORT.value
        assert judgement.backend == StanceBackend.PROMPTED_LLM

    def test_irrelevant_example(self):
        suite = stance_suite("Canada has no king.", "Bananas are yellow.", "irrelevant")
        judgement = classify_stance("Canada has no king.", "Bananas are yellow.", suite)
        assert judgement.label == Stance.IRRELEVANT.value

    def test_nli_contradiction_maps_to_refute(self):
        nli = MockNLIProvider({(MUSK_EVIDENCE, MUSK_CLAIM): "contradiction"})
        suite = ProviderSuiteStub(nli=nli)
        judgement = classify_stance(MUSK_CLAIM, MUSK_EVIDENCE, suite,
                                    backend=StanceBackend.NLI_MAPPED)
        assert judgement.label == Stance.REFUTE.value
        assert judgement.backend == StanceBackend.NLI_MAPPED

    def test_nli_merge_commutes(self):
        # merging the four-label output equals running natively in three-label mode
        pairs = [("entailment", None), ("contradiction", None), ("neutral", None)]
        for nli_label, _ in pairs:
            nli = MockNLIProvider(default=nli_label)
            suite = ProviderSuiteStub(nli=nli)
            four = classify_stance("c", "e", suite, StanceLabelSpace(LabelMode.FOUR_LABEL),
                                   StanceBackend.NLI_MAPPED)
            three = classify_stance("c", "e", suite, StanceLabelSpace(LabelMode.THREE_LABEL),
                                    StanceBackend.NLI_MAPPED)
            assert merge_to_three_labels(four.label) == three.label

    def test_three_label_mode_never_emits_split_support(self):
        suite = stance_suite("c", "e", "support", LabelMode.THREE_LABEL)
        judgement = classify_stance("c", "e", suite,
                                    space=StanceLabelSpace(LabelMode.THREE_LABEL))
        assert judgement.label == "support"
        assert judgement.label in StanceLabelSpace(LabelMode.THREE_LABEL).labels()

    def test_unparseable_answer_raises_with_raw_output(self):
        suite = stance_suite("c", "e", "no comment on this one")
        with pytest.raises(StanceError) as exc:
            classify_stance("c", "e", suite)
        assert "no comment" in exc.value.raw_output

    def test_negated_support_does_not_parse_as_support(self):
        with pytest.raises(StanceError):
            parse_stance("The evidence does not support the claim",
                         StanceLabelSpace(LabelMode.FOUR_LABEL))

    def test_empty_inputs_rejected(self):
        with pytest.raises(ValueError):
            classify_stance("", "e", ProviderSuiteStub())

    @pytest.mark.parametrize("raw,expected", [
        ("completely support", "completely-support"),
        ("Completely Support.", "completely-support"),
        ("The evidence partially supports the claim", "partially-support"),
        ("refutes", "refute"),
        ("IRRELEVANT", "irrelevant"),
        ("support", "completely-support"),  # bare support in four-label mode
    ])
    def test_parse_stance_variants(self, raw, expected):
        assert parse_stance(raw, StanceLabelSpace(LabelMode.FOUR_LABEL)) == expected


def judgement(label, index=0):
    return StanceJudgement(claim_id="c", evidence_index=index, label=label,
                           backend=StanceBackend.PROMPTED_LLM)


def claim_with(stance_reliability_pairs):
    evidence = [make_evidence(i, reliability=r)
                for i, (_, r) in enumerate(stance_reliability_pairs)]
    return make_claim(evidence=evidence)


class TestAggregateVerdict:
    def test_all_irrelevant_is_not_enough_evidence(self):
        pairs = [("irrelevant", Reliability.RELIABLE)] * 5
        claim = claim_with(pairs)
        decision = aggregate_verdict(claim, [judgement(l, i) for i, (l, _) in enumerate(pairs)])
        assert decision.verdict == Verdict.NOT_ENOUGH_EVIDENCE
        assert decision.support_weight == 0.0 and decision.refute_weight == 0.0
        assert decision.needs_correction is False

    def test_all_complete_support_is_true(self):
        pairs = [("completely-support", Reliability.RELIABLE)] * 3
        claim = claim_with(pairs)
        decision = aggregate_verdict(claim, [judgement(l, i) for i, (l, _) in enumerate(pairs)])
        assert decision.verdict == Verdict.TRUE
        assert decision.needs_correction is False

    def test_reliable_refute_beats_unknown_partial_support(self):
        # refute: 1.0; partial support on unknown source: 0.5 * 0.5 = 0.25
        pairs = [("refute", Reliability.RELIABLE), ("partially-support", Reliability.UNKNOWN)]
        claim = claim_with(pairs)
        decision = aggregate_verdict(claim, [judgement(l, i) for i, (l, _) in enumerate(pairs)])
        assert decision.support_weight == pytest.approx(0.25)
        assert decision.refute_weight == pytest.approx(1.0)
        assert decision.verdict == Verdict.FALSE
        assert decision.needs_correction is True

    def test_exact_tie_is_not_enough_evidence(self):
        pairs = [("completely-support", Reliability.UNKNOWN), ("refute", Reliability.UNKNOWN)]
        claim = claim_with(pairs)
        decision = aggregate_verdict(claim, [judgement(l, i) for i, (l, _) in enumerate(pairs)])
        assert decision.support_weight == decision.refute_weight == pytest.approx(0.5)
        assert decision.verdict == Verdict.NOT_ENOUGH_EVIDENCE

    def test_conflicting_partial_support_and_refute(self):
        # partial support and refute on different parts still resolves by weight
        pairs = [("partially-support", Reliability.RELIABLE),
                 ("refute", Reliability.RELIABLE),
                 ("irrelevant", Reliability.RELIABLE)]
        claim = claim_with(pairs)
        decision = aggregate_verdict(claim, [judgement(l, i) for i, (l, _) in enumerate(pairs)])
        assert decision.verdict == Verdict.FALSE
        assert "refute" in decision.rationale

    def test_length_mismatch_rejected(self):
        claim = claim_with([("refute", Reliability.RELIABLE)])
        with pytest.raises(ValueError):
            aggregate_verdict(claim, [judgement("refute", 0), judgement("refute", 1)])

    def test_permutation_invariance(self):
        pairs = [("completely-support", Reliability.RELIABLE),
                 ("refute", Reliability.UNKNOWN),
                 ("partially-support", Reliability.UNRELIABLE),
                 ("irrelevant", Reliability.RELIABLE)]
        claim = claim_with(pairs)
        judgements = [judgement(l, i) for i, (l, _) in enumerate(pairs)]
        reliabilities = [r for _, r in pairs]
        base = aggregate_verdict(claim, judgements, reliabilities)
        reordered = list(zip(judgements, reliabilities))[::-1]
        flipped = aggregate_verdict(claim, [j for j, _ in reordered],
                                    [r for _, r in reordered])
        assert flipped.verdict == base.verdict
        assert flipped.support_weight == pytest.approx(base.support_weight)

    def test_irrelevant_padding_invariance(self):
        pairs = [("refute", Reliability.RELIABLE)]
        claim = claim_with(pairs)
        base = aggregate_verdict(claim, [judgement("refute", 0)],
                                 [Reliability.RELIABLE])
        padded = aggregate_verdict(claim,
                                   [judgement("refute", 0), judgement("irrelevant", 1),
                                    judgement("irrelevant", 2)],
                                   [Reliability.RELIABLE, Reliability.RELIABLE,
                                    Reliability.UNRELIABLE])
        assert padded.verdict == base.verdict

    def test_weight_scaling_invariance(self):
        pairs = [("completely-support", Reliability.RELIABLE),
                 ("refute", Reliability.UNKNOWN),
                 ("partially-support", Reliability.UNRELIABLE)]
        claim = claim_with(pairs)
        judgements = [judgement(l, i) for i, (l, _) in enumerate(pairs)]
        reliabilities = [r for _, r in pairs]
        base = aggregate_verdict(claim, judgements, reliabilities)
        for factor in (0.5, 3.0, 10.0):
            scaled_weights = AggregationWeights(
                reliable=1.0 * factor, unknown=0.5 * factor, unreliable=0.1 * factor)
            scaled = aggregate_verdict(claim, judgements, reliabilities, scaled_weights)
            assert scaled.verdict == base.verdict


class TestVerifyClaim:
    def test_empty_evidence_short_circuits(self):
        claim = make_claim(evidence=[])
        decision = verify_claim(claim, ProviderSuiteStub())
        assert decision.verdict == Verdict.NOT_ENOUGH_EVIDENCE
        assert decision.rationale == "no evidence retrieved"

    def test_gold_false_fixture_matches_hand_trace(self):
        # hand trace: refute(reliable)=1.0 vs CS(unreliable)=0.1 -> false
        evidence = [
            make_evidence(0, reliability=Reliability.RELIABLE, snippet="refuting passage"),
            make_evidence(1, reliability=Reliability.UNRELIABLE, snippet="supporting blog"),
        ]
        claim = make_claim(evidence=evidence)
        pairs = [
            (prompting.render("stance_four_v1", claim=claim.text, evidence="refuting passage"),
             "refute"),
            (prompting.render("stance_four_v1", claim=claim.text, evidence="supporting blog"),
             "completely support"),
        ]
        suite = ProviderSuiteStub(MockCompletionProvider.from_pairs(pairs))
        updated, decision = verify_claim_full(claim, suite)
        assert decision.verdict == Verdict.FALSE
        assert decision.support_weight == pytest.approx(0.1)
        assert decision.refute_weight == pytest.approx(1.0)
        assert updated.verdict == Verdict.FALSE
        assert [e.stance for e in updated.evidence] == [
            Stance.REFUTE, Stance.COMPLETELY_SUPPORT]

    def test_partial_failure_downgrades_to_irrelevant(self):
        evidence = [
            make_evidence(0, snippet="good passage"),
            make_evidence(1, snippet="broken passage"),
        ]
        claim = make_claim(evidence=evidence)
        pairs = [
            (prompting.render("stance_four_v1", claim=claim.text, evidence="good passage"),
             "completely support"),
            (prompting.render("stance_four_v1", claim=claim.text, evidence="broken passage"),
             "mumble mumble"),
        ]
        suite = ProviderSuiteStub(MockCompletionProvider.from_pairs(pairs))
        updated, decision = verify_claim_full(claim, suite)
        assert decision.verdict == Verdict.TRUE
        assert updated.evidence[1].stance == Stance.IRRELEVANT
