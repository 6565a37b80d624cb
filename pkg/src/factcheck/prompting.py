"""Prompt template registry.

Templates live as versioned text files under `prompts/`; the trailing `_vN`
in a template name is its version. Run metadata records a digest per template
so cached completions are invalidated when a template changes.
"""
from __future__ import annotations

import hashlib
from functools import lru_cache
from importlib import resources

_PACKAGE = "factcheck.prompts"

TEMPLATES = (
    "decompose_v1",
    "sentence_checkworthy_v1",
    "claim_category_v1",
    "importance_v1",
    "query_generation_v1",
    "stance_four_v1",
    "stance_three_v1",
    "claim_correction_v1",
    "revise_no_question_v1",
    "revise_with_question_v1",
)


@lru_cache(maxsize=None)
def load_template(name: str) -> str:
    return resources.files(_PACKAGE).joinpath(f"{name}.txt").read_text(encoding="utf-8")


def render(name: str, **fields: object) -> str:
    return load_template(name).format(**fields)


@lru_cache(maxsize=None)
def template_version(name: str) -> str:
    digest = hashlib.sha256(load_template(name).encode("utf-8")).hexdigest()[:8]
    return f"{name}:{digest}"


def prompt_versions() -> dict[str, str]:
    return {name: template_version(name) for name in TEMPLATES}


@lru_cache(maxsize=None)
def load_wordlist(filename: str) -> frozenset[str]:
    """Read a config wordlist (one entry per line, # comments)."""
    text = resources.files("factcheck.config").joinpath(filename).read_text(encoding="utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.casefold())
    return frozenset(words)


def abbreviations() -> frozenset[str]:
    return load_wordlist("abbreviations.txt")


def stopwords() -> frozenset[str]:
    return load_wordlist("stopwords.txt")
