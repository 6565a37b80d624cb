import json
import sys
import textwrap

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_claim, make_document, make_evidence, make_sentence
from factcheck.evaluation import (
    AlwaysCheckworthyAdapter,
    AlwaysFalseAdapter,
    AlwaysTrueAdapter,
    Candidate,
    RandomAdapter,
    SelectionThresholds,
    SubprocessAdapter,
    cosine_similarity,
    eval_classification,
    factscore,
    format_label_table,
    format_report_table,
    levenshtein,
    mean_factscore,
    ngram_distance,
    normalized_edit_distance,
    reports_to_json,
    run_benchmark,
    select_data,
    tokenize,
    word_overlap,
)
from factcheck.model import Category, Stance, Verdict
from factcheck.providers import MockEmbeddingProvider

texts = st.text(alphabet=st.sampled_from("abcd efg."), max_size=40)


class TestLexicalMetrics:
    def test_identity(self):
        assert normalized_edit_distance("a b c", "a b c") == 0.0
        assert word_overlap("a b c", "a b c") == 1.0
        assert ngram_distance("a b c", "a b c") == 0.0

    def test_disjoint(self):
        assert normalized_edit_distance("a b c", "x y z") == 1.0
        assert word_overlap("a b c", "x y z") == 0.0
        assert ngram_distance("a b c", "x y z") == 1.0

    def test_hand_computed_quarter(self):
        # one substitution over four tokens
        assert normalized_edit_distance("a b c d", "a b x d") == 0.25

    def test_hand_computed_overlap(self):
        assert word_overlap("the cat sat", "the cat ran") == 0.5

    def test_empty_cases(self):
        assert normalized_edit_distance("", "") == 0.0
        assert word_overlap("", "") == 1.0
        assert ngram_distance("", "") == 0.0
        assert normalized_edit_distance("", "a b") == 1.0
        assert word_overlap("", "a") == 0.0

    def test_tokenizer_case_folds_and_strips_punctuation(self):
        assert tokenize("The CAT, sat!") == ["the", "cat", "sat"]

    def test_levenshtein_hand_case(self):
        assert levenshtein(["a", "b", "c", "d"], ["a", "b", "x", "d"]) == 1
        assert levenshtein([], ["a"]) == 1

    @given(texts, texts)
    @settings(max_examples=300, deadline=None)
    def test_axioms(self, a, b):
        for metric in (normalized_edit_distance, word_overlap, ngram_distance):
            value = metric(a, b)
            assert 0.0 <= value <= 1.0
            assert metric(a, b) == metric(b, a)
        assert normalized_edit_distance(a, a) == 0.0
        assert ngram_distance(a, a) == 0.0
        assert word_overlap(a, a) == 1.0

    def test_cosine(self):
        assert cosine_similarity([1, 0], [1, 0]) == pytest.approx(1.0)
        assert cosine_similarity([1, 0], [0, 1]) == pytest.approx(0.0)
        assert cosine_similarity([0, 0], [1, 0]) == 0.0
        with pytest.raises(ValueError):
            cosine_similarity([1], [1, 2])


class TestEvalClassification:
    def test_perfect_predictions(self):
        report = eval_classification(["a", "b"], ["a", "b"])
        assert report.accuracy == 1.0
        assert report.macro_f1 == 1.0

    def test_confusion_matrix_row_sums_and_total(self):
        gold = ["a", "a", "b", "c"]
        pred = ["a", "b", "b", "a"]
        report = eval_classification(gold, pred, ["a", "b", "c"])
        assert report.confusion.total() == 4
        for label in ("a", "b", "c"):
            assert report.confusion.gold_count(label) == gold.count(label)

    def test_macro_is_mean_of_per_label(self):
        gold = ["a", "a", "b", "c"]
        pred = ["a", "b", "b", "a"]
        report = eval_classification(gold, pred, ["a", "b", "c"])
        assert report.macro_f1 == pytest.approx(
            sum(s.f1 for s in report.per_label.values()) / len(report.per_label))

    def test_declared_convention_includes_absent_labels(self):
        gold = ["a"] * 4
        pred = ["a"] * 4
        report = eval_classification(gold, pred, ["a", "b"], macro_over="declared")
        assert report.macro_recall == pytest.approx(0.5)

    def test_label_outside_space_rejected(self):
        with pytest.raises(ValueError):
            eval_classification(["a"], ["z"], ["a", "b"])

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            eval_classification(["a"], ["a", "b"])

    @given(st.integers(min_value=1, max_value=200), st.integers(min_value=1, max_value=200))
    @settings(max_examples=100, deadline=None)
    def test_always_positive_closed_forms(self, positives, negatives):
        # for binary gold with prevalence p: accuracy=p, macro-recall=0.5,
        # macro-precision=p/2 exactly (both classes present in gold)
        gold = ["pos"] * positives + ["neg"] * negatives
        pred = ["pos"] * len(gold)
        report = eval_classification(gold, pred, ["pos", "neg"])
        p = positives / len(gold)
        assert report.accuracy == pytest.approx(p)
        assert report.macro_recall == pytest.approx(0.5)
        assert report.macro_precision == pytest.approx(p / 2)


class TestFactscore:
    def _doc(self, verdicts, stances=None):
        claims = []
        for i, verdict in enumerate(verdicts):
            evidence = ()
            if stances is not None:
                evidence = tuple(make_evidence(j, stance=s) for j, s in enumerate(stances[i]))
            claims.append(make_claim(cid=f"c{i}", text=f"Fact {i}.", verdict=verdict,
                                     evidence=evidence))
        return make_document(sentences=[make_sentence(claims=claims)])

    def test_half_supported(self):
        doc = self._doc([Verdict.TRUE, Verdict.TRUE, Verdict.FALSE,
                         Verdict.NOT_ENOUGH_EVIDENCE])
        assert factscore(doc) == 0.5

    def test_all_supported(self):
        doc = self._doc([Verdict.TRUE, Verdict.TRUE])
        assert factscore(doc) == 1.0

    def test_no_checkworthy_claims_is_excluded_sentinel(self):
        doc = make_document(sentences=[make_sentence(category=Category.OPINION,
                                                     text="I think so.", claims=[])])
        assert factscore(doc) is None
        assert mean_factscore([doc]) is None

    def test_partial_support_alone_does_not_count(self):
        doc = self._doc([Verdict.TRUE], stances=[[Stance.PARTIALLY_SUPPORT]])
        assert factscore(doc) == 0.0
        doc = self._doc([Verdict.TRUE],
                        stances=[[Stance.PARTIALLY_SUPPORT, Stance.COMPLETELY_SUPPORT]])
        assert factscore(doc) == 1.0

    def test_monotonicity_flip_one_claim(self):
        base = [Verdict.FALSE] * 4
        low = factscore(self._doc(base))
        base[0] = Verdict.TRUE
        high = factscore(self._doc(base))
        assert high == pytest.approx(low + 1 / 4)

    def test_strict_rejects_unassessed(self):
        doc = self._doc([Verdict.UNASSESSED])
        with pytest.raises(ValueError):
            factscore(doc, strict=True)


def build_eval_dataset():
    """Small gold dataset exercising every subtask."""
    docs = []
    claims1 = [
        make_claim(cid="c1", text="Paris is the capital of France.", verdict=Verdict.TRUE,
                   evidence=[make_evidence(0, stance=Stance.COMPLETELY_SUPPORT),
                             make_evidence(1, stance=Stance.IRRELEVANT)]),
        make_claim(cid="c2", text="Paris has 40 million residents.", verdict=Verdict.FALSE,
                   edits=[],
                   evidence=[make_evidence(2, stance=Stance.REFUTE)]),
    ]
    sentences1 = [
        make_sentence(sid="s1", text="Paris is the capital of France and has 40 "
                                     "million residents.", claims=claims1),
        make_sentence(sid="s2", text="I adore Paris.", category=Category.OPINION, claims=[]),
    ]
    docs.append(make_document(doc_id="d1",
                              response="Paris is the capital of France and has 40 "
                                       "million residents. I adore Paris.",
                              sentences=sentences1,
                              revised_response="Paris is the capital of France and has "
                                               "2 million residents. I adore Paris."))
    claims2 = [
        make_claim(cid="c3", text="Oslo is the capital of Norway.", verdict=Verdict.TRUE,
                   evidence=[make_evidence(3, stance=Stance.PARTIALLY_SUPPORT)]),
    ]
    docs.append(make_document(doc_id="d2", response="Oslo is the capital of Norway.",
                              sentences=[make_sentence(sid="s3", claims=claims2,
                                                       text="Oslo is the capital of Norway.")]))
    return docs


class TestRunBenchmark:
    def test_always_checkworthy_subtasks(self):
        reports = run_benchmark(AlwaysCheckworthyAdapter(), build_eval_dataset(),
                                ["s1-sentence-cw", "s2-claim-cw"])
        by_task = {r.subtask: r for r in reports}
        assert by_task["s1-sentence-cw"].accuracy == pytest.approx(2 / 3)
        assert by_task["s2-claim-cw"].accuracy == 1.0

    def test_verification_baselines(self):
        dataset = build_eval_dataset()
        true_report = run_benchmark(AlwaysTrueAdapter(), dataset, ["s4-verification"])[0]
        assert true_report.per_label["true"].recall == 1.0
        assert true_report.per_label["false"].f1 == 0.0
        false_report = run_benchmark(AlwaysFalseAdapter(), dataset, ["s4-verification"])[0]
        assert false_report.per_label["false"].recall == 1.0

    def test_random_adapter_is_seed_stable(self):
        dataset = build_eval_dataset()
        first = run_benchmark(RandomAdapter(seed=7), dataset, ["s4-verification"])[0]
        second = run_benchmark(RandomAdapter(seed=7), dataset, ["s4-verification"])[0]
        assert first.accuracy == second.accuracy
        assert first.confusion == second.confusion

    def test_stance_subtask_three_label(self):
        class SupportAdapter:
            def classify_stance(self, claim, evidence):
                return Stance.COMPLETELY_SUPPORT

        report = run_benchmark(SupportAdapter(), build_eval_dataset(), ["s3-stance"],
                               three_label_stance=True)[0]
        assert set(report.confusion.labels) == {"support", "refute", "irrelevant"}
        # gold: CS, IR, RE, PS -> support, irrelevant, refute, support
        assert report.per_label["support"].recall == 1.0

    def test_revision_subtask_intrinsics(self):
        class EchoAdapter:
            def revise(self, document, true_claims):
                return document.response

        report = run_benchmark(EchoAdapter(), build_eval_dataset(), ["s5-revision"],
                               embedder=MockEmbeddingProvider())[0]
        assert report.intrinsic is not None
        assert report.intrinsic["edit_distance"] == 0.0
        assert report.intrinsic["word_overlap"] == 1.0
        assert report.sample_count == 1  # only d1 has a gold revision

    def test_missing_hook_raises(self):
        with pytest.raises(ValueError):
            run_benchmark(object(), build_eval_dataset(), ["s4-verification"])

    def test_unknown_subtask_rejected(self):
        with pytest.raises(ValueError):
            run_benchmark(AlwaysTrueAdapter(), build_eval_dataset(), ["s9-bogus"])

    def test_report_export_formats(self):
        reports = run_benchmark(AlwaysCheckworthyAdapter(), build_eval_dataset(),
                                ["s1-sentence-cw"])
        table = format_report_table(reports)
        assert "s1-sentence-cw" in table
        assert "acc" in table
        label_table = format_label_table(reports[0])
        assert "checkworthy" in label_table
        parsed = json.loads(reports_to_json(reports))
        assert parsed[0]["subtask"] == "s1-sentence-cw"


class TestSubprocessAdapter:
    def test_line_delimited_json_protocol(self, tmp_path):
        script = tmp_path / "checker.py"
        script.write_text(textwrap.dedent("""
            import json, sys
            for line in sys.stdin:
                request = json.loads(line)
                if request["op"] == "verify":
                    result = "true"
                elif request["op"] == "classify_sentence":
                    result = True
                else:
                    result = "factual"
                print(json.dumps({"result": result}), flush=True)
        """), encoding="utf-8")
        adapter = SubprocessAdapter([sys.executable, str(script)])
        try:
            report = run_benchmark(adapter, build_eval_dataset(), ["s4-verification"])[0]
            assert report.per_label["true"].recall == 1.0
            assert adapter.classify_sentence("Paris is in France.") is True
        finally:
            adapter.close()


class FixedFactscorePipeline:
    """Stand-in pipeline that returns documents with scripted verdicts."""

    def __init__(self, verdicts_by_question):
        self.verdicts = verdicts_by_question

    def __call__(self, question, response):
        verdicts = self.verdicts[question]
        claims = [make_claim(cid=f"c{i}", text=f"Fact {i}.", verdict=v)
                  for i, v in enumerate(verdicts)]
        return make_document(doc_id=question, question=question, response=response,
                             sentences=[make_sentence(claims=claims)])


class TestSelectData:
    def test_selection_filters(self):
        long_text = "x" * 250
        candidates = [
            Candidate("q-short", "too short", None),
            Candidate("q-similar", long_text, "gold answer"),
            Candidate("q-keep", long_text, None),
            Candidate("q-factual", long_text, None),
        ]
        embedder = MockEmbeddingProvider(overrides={
            long_text: [1.0, 0.0], "gold answer": [1.0, 0.0]})

        class Suite:
            embedding = embedder

        pipeline = FixedFactscorePipeline({
            "q-keep": [Verdict.FALSE, Verdict.FALSE, Verdict.FALSE, Verdict.FALSE,
                       Verdict.TRUE][:5],            # factscore 0.2 -> dropped (not < 0.2)
            "q-factual": [Verdict.FALSE] * 4,        # factscore 0.0 -> kept
        })
        # q-keep at exactly the threshold is excluded; strictly-below is kept
        selected = select_data(candidates, Suite(), SelectionThresholds(),
                               pipeline=pipeline)
        assert [c.question for c in selected] == ["q-factual"]

    def test_zero_factscore_kept_and_errors_skipped(self):
        long_text = "y" * 300

        def pipeline(question, response):
            if question == "q-boom":
                raise RuntimeError("provider exploded")
            return FixedFactscorePipeline({"q": [Verdict.FALSE]})("q", response)

        class Suite:
            embedding = MockEmbeddingProvider()

        candidates = [Candidate("q-boom", long_text), Candidate("q-ok", long_text)]
        selected = select_data(candidates, Suite(), pipeline=pipeline)
        assert [c.question for c in selected] == ["q-ok"]


class TestAdapterBaselineOnReferenceShapedData:
    def test_always_checkworthy_reproduces_reference_rows(self):
        # full harness path over a dataset synthesized with the reference
        # corpus prevalences (277/311 sentences, 661/678 claims)
        from test_model import build_reference_shaped_dataset

        dataset = build_reference_shaped_dataset()
        reports = run_benchmark(AlwaysCheckworthyAdapter(), dataset,
                                ["s1-sentence-cw", "s2-claim-cw"])
        sentence_report, claim_report = reports
        assert (round(sentence_report.accuracy, 3),
                round(sentence_report.macro_precision, 3),
                round(sentence_report.macro_recall, 3),
                round(sentence_report.macro_f1, 3)) == (0.891, 0.445, 0.500, 0.471)
        assert (round(claim_report.accuracy, 3),
                round(claim_report.macro_precision, 3),
                round(claim_report.macro_recall, 3),
                round(claim_report.macro_f1, 3)) == (0.975, 0.325, 0.333, 0.329)


class TestMockPipelineAdapter:
    def test_matches_hand_scored_oracle_on_fixture(self):
        # the adapter runs on the same transcripts that produced the gold
        # documents, so the hand-scored oracle is a perfect report
        import e2e_fixtures as e2e
        from factcheck.pipeline import PipelineAdapter

        dataset = e2e.expected_documents()
        adapter = PipelineAdapter(e2e.build_suite())
        reports = run_benchmark(adapter, dataset,
                                ["s2-claim-cw", "s3-stance", "s4-verification"])
        for report in reports:
            assert report.accuracy == 1.0, report.subtask
            assert report.macro_f1 == 1.0, report.subtask
        assert reports[2].confusion.total() == 5  # five verdict-bearing claims
