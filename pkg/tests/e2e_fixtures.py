"""Hermetic end-to-end fixtures: three documents with exact mock transcripts
and the hand-traced documents the pipeline must produce for them.

Document A exercises a replace correction (wrong justice named), document B a
delete-claim correction (fabricated second black president), and document C a
clean response with a non-checkworthy opinion sentence.
"""
from factcheck import prompting
from factcheck.model import (
    AtomicClaim,
    Category,
    DocumentVerdict,
    EditKind,
    EditOperation,
    EvidenceItem,
    FactcheckDocument,
    ImportanceLevel,
    Reliability,
    SentenceUnit,
    Stance,
    Verdict,
)
from factcheck.providers import FixtureSearchProvider, MockCompletionProvider, MockEmbeddingProvider
from factcheck.providers.suite import ProviderSuite

# -- document A: replace case -------------------------------------------------

QUESTION_A = "Who was the oldest justice on the US supreme court in 1980?"
SENT_A1 = ("In 1980, the oldest justice on the United States Supreme Court was "
           "Justice William O. Douglas.")
SENT_A2 = "He retired in 1975."
RESPONSE_A = f"{SENT_A1} {SENT_A2}"
CLAIM_A1 = SENT_A1
CLAIM_A2 = "Justice William O. Douglas retired in 1975."
CORRECTED_A1 = ("In 1980, the oldest justice on the United States Supreme Court was "
                "Justice William J. Brennan Jr.")

URL_BRENNAN = "https://courts.example/brennan-1980"
DOC_BRENNAN = ("The oldest justice on the Supreme Court in 1980 was William J. "
               "Brennan Jr. Justice William O. Douglas was no longer on the court "
               "in 1980.")
URL_RETIRE = "https://courts.example/douglas-retirement"
DOC_RETIRE = ("Justice William O. Douglas retired from the Supreme Court in 1975 "
              "after suffering a stroke.")

# -- document B: delete-claim case ---------------------------------------------

QUESTION_B = "How many black presidents has the United States had?"
SENT_B1 = "Obama was the first black president in the history of the United States."
SENT_B2 = "Trump was the second black president."
RESPONSE_B = f"{SENT_B1} {SENT_B2}"

URL_PRESIDENTS = "https://history.example/black-presidents"
DOC_PRESIDENTS = ("Barack Obama was the first black president of the United States "
                  "and as of 2021 the only one; Donald Trump is not black.")

# -- document C: factually correct with an opinion sentence ---------------------

QUESTION_C = "What is Canada's system of government?"
SENT_C1 = "Canada is a constitutional monarchy."
SENT_C2 = "I think that is a fine arrangement."
RESPONSE_C = f"{SENT_C1} {SENT_C2}"

URL_CANADA = "https://gov.example/canada-monarchy"
DOC_CANADA = "Canada is a constitutional monarchy with the monarch as head of state."


def _decompose_output(blocks):
    parts = []
    first = True
    for sentence, claims in blocks:
        lines = ",\n".join(f'    "{c}"' for c in claims)
        if first:
            parts.append(f"Atomic facts for this sentence are:\n[\n{lines}\n]")
            first = False
        else:
            parts.append(f"The sentence is: {sentence}\n"
                         f"Atomic facts for this sentence are:\n[\n{lines}\n]")
    return "\n\n".join(parts)


def build_transcript() -> list[tuple[str, str]]:
    def decompose(context, sentence, blocks):
        return (prompting.render("decompose_v1", context=context, sentence=sentence),
                _decompose_output(blocks))

    def category(text, answer):
        return (prompting.render("claim_category_v1", claim=text), answer)

    def queries(claim_text):
        return (prompting.render("query_generation_v1", claim=claim_text, n=3), "")

    def stance(claim_text, evidence_text, answer):
        return (prompting.render("stance_four_v1", claim=claim_text,
                                 evidence=evidence_text), answer)

    def correction(claim_text, evidence_texts, answer):
        block = "\n".join(f"- {e}" for e in evidence_texts)
        return (prompting.render("claim_correction_v1", claim=claim_text,
                                 evidence=block), answer)

    return [
        # document A
        decompose(RESPONSE_A, SENT_A1, [(SENT_A1, [CLAIM_A1]), (SENT_A2, [CLAIM_A2])]),
        category(SENT_A1, "factual claim"),      # also covers CLAIM_A1
        category(SENT_A2, "factual claim"),
        category(CLAIM_A2, "factual claim"),
        queries(CLAIM_A1),
        queries(CLAIM_A2),
        stance(CLAIM_A1, DOC_BRENNAN, "refute"),
        stance(CLAIM_A2, DOC_RETIRE, "completely support"),
        correction(CLAIM_A1, [DOC_BRENNAN], CORRECTED_A1),
        # document B
        decompose(RESPONSE_B, SENT_B1, [(SENT_B1, [SENT_B1]), (SENT_B2, [SENT_B2])]),
        category(SENT_B1, "factual claim"),
        category(SENT_B2, "factual claim"),
        queries(SENT_B1),
        queries(SENT_B2),
        stance(SENT_B1, DOC_PRESIDENTS, "completely support"),
        stance(SENT_B2, DOC_PRESIDENTS, "refute"),
        correction(SENT_B2, [DOC_PRESIDENTS], "DELETE"),
        # document C
        decompose(RESPONSE_C, SENT_C1, [(SENT_C1, [SENT_C1]), (SENT_C2, [SENT_C2])]),
        category(SENT_C1, "factual claim"),
        category(SENT_C2, "opinion"),
        queries(SENT_C1),
        stance(SENT_C1, DOC_CANADA, "completely support"),
    ]


CORPUS_QUERIES = {
    CLAIM_A1: [URL_BRENNAN],
    CLAIM_A2: [URL_RETIRE],
    SENT_B1: [URL_PRESIDENTS],
    SENT_B2: [URL_PRESIDENTS],
    SENT_C1: [URL_CANADA],
}

CORPUS_DOCUMENTS = {
    URL_BRENNAN: DOC_BRENNAN,
    URL_RETIRE: DOC_RETIRE,
    URL_PRESIDENTS: DOC_PRESIDENTS,
    URL_CANADA: DOC_CANADA,
}


def build_suite(corpus_dir=None) -> ProviderSuite:
    """Mock suite over the fixture corpus; on-disk when corpus_dir is given."""
    if corpus_dir is not None:
        from factcheck.providers import write_fixture_corpus

        write_fixture_corpus(corpus_dir, CORPUS_QUERIES, CORPUS_DOCUMENTS)
        search = FixtureSearchProvider.from_directory(corpus_dir)
    else:
        search = FixtureSearchProvider(CORPUS_QUERIES, CORPUS_DOCUMENTS)
    return ProviderSuite(
        completion=MockCompletionProvider.from_pairs(build_transcript()),
        embedding=MockEmbeddingProvider(),
        search=search,
        resolved_config={"mode": "mock-e2e"},
    )


def _evidence(query, url, snippet, stance):
    return EvidenceItem(query=query, url=url, snippet=snippet,
                        reliability=Reliability.UNKNOWN, stance=stance)


def expected_document_a() -> FactcheckDocument:
    claim_a1 = AtomicClaim(
        id="s1c1", text=CLAIM_A1, category=Category.FACTUAL,
        importance=ImportanceLevel.INTERMEDIATE,
        evidence=(_evidence(CLAIM_A1, URL_BRENNAN, DOC_BRENNAN, Stance.REFUTE),),
        verdict=Verdict.FALSE,
        edits=(EditOperation(EditKind.REPLACE, target_span="O. Douglas.",
                             replacement="J. Brennan Jr."),),
        revised_text=CORRECTED_A1,
    )
    claim_a2 = AtomicClaim(
        id="s2c1", text=CLAIM_A2, category=Category.FACTUAL,
        importance=ImportanceLevel.INTERMEDIATE,
        evidence=(_evidence(CLAIM_A2, URL_RETIRE, DOC_RETIRE,
                            Stance.COMPLETELY_SUPPORT),),
        verdict=Verdict.TRUE,
    )
    return FactcheckDocument(
        id="docA", question=QUESTION_A, response=RESPONSE_A,
        sentences=(
            SentenceUnit(id="s1", text=SENT_A1, checkworthy=True,
                         category=Category.FACTUAL, claims=(claim_a1,)),
            SentenceUnit(id="s2", text=SENT_A2, checkworthy=True,
                         category=Category.FACTUAL, claims=(claim_a2,)),
        ),
        revised_response=f"{CORRECTED_A1} {SENT_A2}",
        document_verdict=DocumentVerdict.CONTAINS_ERRORS,
    )


def expected_document_b() -> FactcheckDocument:
    claim_b1 = AtomicClaim(
        id="s1c1", text=SENT_B1, category=Category.FACTUAL,
        importance=ImportanceLevel.INTERMEDIATE,
        evidence=(_evidence(SENT_B1, URL_PRESIDENTS, DOC_PRESIDENTS,
                            Stance.COMPLETELY_SUPPORT),),
        verdict=Verdict.TRUE,
    )
    claim_b2 = AtomicClaim(
        id="s2c1", text=SENT_B2, category=Category.FACTUAL,
        importance=ImportanceLevel.INTERMEDIATE,
        evidence=(_evidence(SENT_B2, URL_PRESIDENTS, DOC_PRESIDENTS, Stance.REFUTE),),
        verdict=Verdict.FALSE,
        edits=(EditOperation(EditKind.DELETE_CLAIM),),
    )
    return FactcheckDocument(
        id="docB", question=QUESTION_B, response=RESPONSE_B,
        sentences=(
            SentenceUnit(id="s1", text=SENT_B1, checkworthy=True,
                         category=Category.FACTUAL, claims=(claim_b1,)),
            SentenceUnit(id="s2", text=SENT_B2, checkworthy=True,
                         category=Category.FACTUAL, claims=(claim_b2,)),
        ),
        revised_response=SENT_B1,
        document_verdict=DocumentVerdict.CONTAINS_ERRORS,
    )


def expected_document_c() -> FactcheckDocument:
    claim_c1 = AtomicClaim(
        id="s1c1", text=SENT_C1, category=Category.FACTUAL,
        importance=ImportanceLevel.INTERMEDIATE,
        evidence=(_evidence(SENT_C1, URL_CANADA, DOC_CANADA,
                            Stance.COMPLETELY_SUPPORT),),
        verdict=Verdict.TRUE,
    )
    return FactcheckDocument(
        id="docC", question=QUESTION_C, response=RESPONSE_C,
        sentences=(
            SentenceUnit(id="s1", text=SENT_C1, checkworthy=True,
                         category=Category.FACTUAL, claims=(claim_c1,)),
            SentenceUnit(id="s2", text=SENT_C2, checkworthy=False,
                         category=Category.OPINION, claims=()),
        ),
        revised_response=None,
        document_verdict=DocumentVerdict.FACTUALLY_CORRECT,
    )


E2E_INPUTS = (
    ("docA", QUESTION_A, RESPONSE_A),
    ("docB", QUESTION_B, RESPONSE_B),
    ("docC", QUESTION_C, RESPONSE_C),
)


def expected_documents():
    return [expected_document_a(), expected_document_b(), expected_document_c()]
