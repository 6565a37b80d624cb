import pytest

import e2e_fixtures as e2e
from factcheck.model import EditKind, Verdict, serialize_document, validate_document
from factcheck.pipeline import FactcheckPipeline, PipelineConfig, minimal_replace_edit, propose_correction
from factcheck.providers import MockCompletionProvider
from factcheck.revision import apply_edits


class TestMinimalReplaceEdit:
    def test_middle_word_substitution(self):
        edit = minimal_replace_edit("the cat sat down", "the dog sat down")
        assert edit.target_span == "cat"
        assert edit.replacement == "dog"

    def test_word_boundary_snapping(self):
        edit = minimal_replace_edit("counted 1975 stars", "counted 1976 stars")
        assert edit.target_span == "1975"
        assert edit.replacement == "1976"

    def test_douglas_to_brennan(self):
        edit = minimal_replace_edit(e2e.CLAIM_A1, e2e.CORRECTED_A1)
        assert edit.target_span == "O. Douglas."
        assert edit.replacement == "J. Brennan Jr."
        assert apply_edits(e2e.CLAIM_A1, [edit]) == e2e.CORRECTED_A1

    def test_round_trip_property(self):
        cases = [
            ("a b c", "a x c"),
            ("one two", "one two three"),
            ("alpha beta gamma", "delta"),
            ("same prefix tail", "same prefix other tail"),
        ]
        for original, corrected in cases:
            edit = minimal_replace_edit(original, corrected)
            assert apply_edits(original, [edit]) == corrected

    def test_identical_texts_rejected(self):
        with pytest.raises(ValueError):
            minimal_replace_edit("same", "same")


class SuiteStub:
    def __init__(self, completion):
        self.completion = completion


class TestProposeCorrection:
    def test_delete_answer_becomes_delete_claim(self):
        from conftest import make_claim, make_evidence
        from factcheck.model import Stance

        claim = make_claim(text="Trump was the second black president.",
                           evidence=[make_evidence(0, stance=Stance.REFUTE,
                                                   snippet="only one black president")])
        suite = SuiteStub(MockCompletionProvider(rules=[("Corrected claim:", "DELETE")]))
        corrected = propose_correction(claim, suite)
        assert corrected.deleted
        assert corrected.edits[0].kind == EditKind.DELETE_CLAIM
        assert corrected.revised_text is None

    def test_corrected_text_becomes_replace(self):
        from conftest import make_claim, make_evidence
        from factcheck.model import Stance

        claim = make_claim(text="Venus is the closest planet to the sun.",
                           evidence=[make_evidence(0, stance=Stance.REFUTE,
                                                   snippet="Mercury is closest")])
        suite = SuiteStub(MockCompletionProvider(
            rules=[("Corrected claim:", "Mercury is the closest planet to the sun.")]))
        corrected = propose_correction(claim, suite)
        assert corrected.edits[0].kind == EditKind.REPLACE
        assert corrected.revised_text == "Mercury is the closest planet to the sun."

    def test_unchanged_answer_leaves_claim_alone(self):
        from conftest import make_claim

        claim = make_claim(text="A disputed claim.")
        suite = SuiteStub(MockCompletionProvider(rules=[("Corrected claim:",
                                                         "A disputed claim.")]))
        assert propose_correction(claim, suite) == claim


class TestPipelineEndToEnd:
    def test_produces_hand_traced_documents(self):
        suite = e2e.build_suite()
        pipeline = FactcheckPipeline(suite)
        produced = [pipeline.run(question, response, doc_id=doc_id)
                    for doc_id, question, response in e2e.E2E_INPUTS]
        assert produced == e2e.expected_documents()

    def test_every_document_validates(self):
        suite = e2e.build_suite()
        pipeline = FactcheckPipeline(suite)
        for doc_id, question, response in e2e.E2E_INPUTS:
            doc = pipeline.run(question, response, doc_id=doc_id)
            assert validate_document(doc, strict=True) == []

    def test_byte_identical_across_runs_and_suites(self, tmp_path):
        def run_all(corpus_dir):
            suite = e2e.build_suite(corpus_dir)
            pipeline = FactcheckPipeline(suite)
            return "\n".join(serialize_document(pipeline.run(q, r, doc_id=d))
                             for d, q, r in e2e.E2E_INPUTS)

        first = run_all(None)
        second = run_all(None)
        on_disk = run_all(tmp_path / "corpus")
        assert first == second == on_disk

    def test_no_checkworthy_claims_document_verdict(self):
        from factcheck import prompting
        from factcheck.model import DocumentVerdict

        response = "I think pizza is nice."
        transcript = [
            (prompting.render("decompose_v1", context=response, sentence=response),
             '["I think pizza is nice."]'),
            (prompting.render("claim_category_v1", claim=response), "opinion"),
        ]
        suite = e2e.build_suite()
        suite.completion = MockCompletionProvider.from_pairs(transcript)
        doc = FactcheckPipeline(suite).run("Opinion?", response, doc_id="op1")
        assert doc.document_verdict == DocumentVerdict.NO_CHECKWORTHY_CLAIMS
        assert doc.revised_response is None

    def test_strict_mode_rejects_pronoun_claims(self):
        from factcheck import prompting
        from factcheck.pipeline import LintError

        response = "It does not have a king."
        transcript = [
            (prompting.render("decompose_v1", context=response, sentence=response),
             '["It does not have a king."]'),
            (prompting.render("claim_category_v1", claim=response), "factual claim"),
        ]
        suite = e2e.build_suite()
        suite.completion = MockCompletionProvider.from_pairs(transcript)
        with pytest.raises(LintError):
            FactcheckPipeline(suite, PipelineConfig(strict=True)).run(
                "King?", response, doc_id="lint1")
