import random

import pytest

from factcheck.model import (
    AtomicClaim,
    Category,
    EditKind,
    EditOperation,
    EvidenceItem,
    FactcheckDocument,
    ImportanceLevel,
    Reliability,
    SentenceUnit,
    Source,
    Stance,
    Verdict,
)


def make_evidence(i=0, stance=Stance.UNASSESSED, reliability=Reliability.UNKNOWN,
                  url=None, snippet=None, query="q"):
    return EvidenceItem(
        query=query,
        url=url or f"https://example.org/page{i}",
        snippet=snippet or f"evidence snippet {i}",
        reliability=reliability,
        stance=stance,
    )


def make_claim(cid="c1", text="Paris is the capital of France.",
               category=Category.FACTUAL, verdict=Verdict.UNASSESSED,
               evidence=(), edits=(), revised_text=None,
               importance=ImportanceLevel.INTERMEDIATE):
    return AtomicClaim(id=cid, text=text, category=category, importance=importance,
                       evidence=tuple(evidence), verdict=verdict, edits=tuple(edits),
                       revised_text=revised_text)


def make_sentence(sid="s1", text="Paris is the capital of France.",
                  category=Category.FACTUAL, claims=None, deleted=False,
                  revised_text=None):
    checkworthy = category == Category.FACTUAL
    if claims is None:
        claims = [make_claim(cid=f"{sid}c1", text=text)] if checkworthy else []
    return SentenceUnit(id=sid, text=text, checkworthy=checkworthy, category=category,
                        claims=tuple(claims), revised_text=revised_text, deleted=deleted)


def make_document(doc_id="d1", question="What is the capital of France?",
                  response="Paris is the capital of France.", sentences=None,
                  revised_response=None, document_verdict=None, source=Source.OTHER):
    if sentences is None:
        sentences = [make_sentence()]
    return FactcheckDocument(id=doc_id, question=question, response=response,
                             source=source, sentences=tuple(sentences),
                             revised_response=revised_response,
                             document_verdict=document_verdict)


def random_document(rng: random.Random, doc_id: str) -> FactcheckDocument:
    """Arbitrary valid document for round-trip style tests."""
    words = ["alpha", "beta", "gamma", "delta", "omega", "sigma", "kappa", "zeta"]

    def text(n):
        return " ".join(rng.choice(words) for _ in range(n)).capitalize() + "."

    sentences = []
    for s in range(rng.randint(0, 4)):
        category = rng.choice([Category.FACTUAL, Category.FACTUAL, Category.OPINION,
                               Category.OTHER])
        claims = []
        if category == Category.FACTUAL:
            for c in range(rng.randint(1, 3)):
                claim_text = text(rng.randint(3, 8))
                evidence = tuple(
                    make_evidence(i, stance=rng.choice(list(Stance)),
                                  reliability=rng.choice(list(Reliability)))
                    for i in range(rng.randint(0, 5)))
                verdict = rng.choice([Verdict.TRUE, Verdict.FALSE,
                                      Verdict.NOT_ENOUGH_EVIDENCE, Verdict.UNASSESSED])
                edits = ()
                revised = None
                if rng.random() < 0.3:
                    target = claim_text.split()[0]
                    if rng.random() < 0.5:
                        edits = (EditOperation(EditKind.DELETE_CLAIM),)
                    else:
                        edits = (EditOperation(EditKind.REPLACE, target_span=target,
                                               replacement="corrected"),)
                        revised = claim_text.replace(target, "corrected", 1)
                claims.append(make_claim(
                    cid=f"{doc_id}s{s}c{c}", text=claim_text,
                    verdict=verdict, evidence=evidence, edits=edits, revised_text=revised,
                    importance=rng.choice(list(ImportanceLevel))))
        sentences.append(SentenceUnit(
            id=f"{doc_id}s{s}", text=text(rng.randint(4, 10)),
            checkworthy=category == Category.FACTUAL, category=category,
            claims=tuple(claims), deleted=rng.random() < 0.1))
    return make_document(doc_id=doc_id, response=" ".join(s.text for s in sentences) or "Empty.",
                         sentences=sentences)


@pytest.fixture
def rng():
    return random.Random(20240817)
