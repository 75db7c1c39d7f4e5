"""Dataset ingestion and the canonical record model.

Two raw formats are supported: the SemEval-2014 Task 4 XML schema
(sentence elements with aspectCategories children, no targets) and the
SentiHood JSON schema (text plus opinions with target_entity / aspect /
sentiment).  Both are normalized into :class:`Review` records, written and
read as JSON lines so every downstream stage is file-driven.
"""

from __future__ import annotations

import json
import logging
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import DataFormatError, ValidationError
from .textutils import simple_tokenize

log = logging.getLogger(__name__)

# Admissible sentiment values, in tie-break order (metrics argmax breaks
# ties toward the earlier label).
SENTIMENT_LABELS = ("none", "negative", "neutral", "positive", "conflict")
LABEL_ORDER = {lab: i for i, lab in enumerate(SENTIMENT_LABELS)}

SEMEVAL_CATEGORIES = ("food", "price", "service", "ambience", "anecdotes")
SENTIHOOD_CATEGORIES = ("price", "transit-location", "safety", "general")

# TABSA units only admit a reduced label set.
TABSA_LABELS = ("none", "negative", "positive")
ABSA_LABELS = SENTIMENT_LABELS


@dataclass(frozen=True)
class ParsedToken:
    """One token of a dependency parse; indices are 1-based, head 0 means root."""

    index: int
    form: str
    lemma: str | None
    upos: str
    head: int
    deprel: str


@dataclass(frozen=True)
class Annotation:
    """A gold (target?, category, sentiment) triple attached to a review."""

    target: str | None
    category: str
    sentiment: str


@dataclass
class Review:
    id: str
    text: str
    tokens: tuple[ParsedToken, ...] = ()
    annotations: tuple[Annotation, ...] = ()
    split: str = "train"

    def token_forms(self, lower: bool = True) -> list[str]:
        """Canonical token sequence: parser tokens when attached, else a simple split."""
        if self.tokens:
            forms = [t.form for t in self.tokens]
        else:
            forms = simple_tokenize(self.text)
            return forms  # simple_tokenize already lowercases
        return [f.lower() for f in forms] if lower else forms


@dataclass
class Dataset:
    task: str  # "absa" | "tabsa"
    categories: tuple[str, ...]
    reviews: list[Review] = field(default_factory=list)
    targets: tuple[str, ...] = ()  # TABSA target vocabulary, e.g. ("LOC1", "LOC2")

    def __len__(self) -> int:
        return len(self.reviews)


@dataclass(frozen=True)
class ClassificationUnit:
    review_id: str
    target: str | None
    category: str
    gold: str

    def key(self) -> tuple[str, str, str]:
        return (self.review_id, self.target or "", self.category)


def _check_sentiment(value: str, review_id: str, admissible=SENTIMENT_LABELS) -> str:
    value = value.strip().lower()
    if value not in admissible or value == "none":
        raise ValidationError(
            f"review {review_id!r}: unknown polarity {value!r} "
            f"(expected one of {[v for v in admissible if v != 'none']})"
        )
    return value


def load_semeval(path, split: str = "train") -> Dataset:
    """Load a SemEval-2014 Task 4 XML file into an ABSA dataset.

    The raw category 'anecdotes/miscellaneous' is normalized to 'anecdotes'.
    Raises DataFormatError for malformed XML (with byte position) and
    ValidationError for unknown polarity strings.
    """
    path = Path(path)
    try:
        root = ET.parse(str(path)).getroot()
    except ET.ParseError as e:
        raise DataFormatError(f"{path}: malformed XML at line {e.position[0]}, column {e.position[1]}") from e

    reviews: list[Review] = []
    for i, sent in enumerate(root.iter("sentence")):
        rid = sent.get("id") or f"s{i}"
        text_el = sent.find("text")
        text = (text_el.text or "") if text_el is not None else ""
        anns: list[Annotation] = []
        seen: set[str] = set()
        for ac in sent.iter("aspectCategory"):
            category = (ac.get("category") or "").strip().lower()
            if category == "anecdotes/miscellaneous":
                category = "anecdotes"
            polarity = _check_sentiment(ac.get("polarity") or "", rid)
            if category in seen:
                log.warning("review %s: duplicate category %r, keeping first", rid, category)
                continue
            seen.add(category)
            anns.append(Annotation(target=None, category=category, sentiment=polarity))
        reviews.append(Review(id=rid, text=text, annotations=tuple(anns), split=split))
    return Dataset(task="absa", categories=SEMEVAL_CATEGORIES, reviews=reviews)


def load_sentihood(path, split: str = "train") -> Dataset:
    """Load a SentiHood JSON file into a TABSA dataset.

    Only the four evaluated categories are retained; opinions on other
    aspects are dropped.  An opinion whose target does not occur in the
    text is kept with a warning.  Duplicate (target, category) opinions
    keep the first and warn.
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise DataFormatError(f"{path}: malformed JSON: {e}") from e
    if not isinstance(data, list):
        raise DataFormatError(f"{path}: expected a top-level JSON array of entries")

    kept = set(SENTIHOOD_CATEGORIES)
    reviews: list[Review] = []
    for i, entry in enumerate(data):
        rid = str(entry.get("id", i))
        text = entry.get("text", "")
        text_tokens = set(simple_tokenize(text))
        anns: list[Annotation] = []
        seen: set[tuple[str, str]] = set()
        for op in entry.get("opinions", []):
            category = (op.get("aspect") or "").strip().lower()
            if category not in kept:
                continue
            target = (op.get("target_entity") or "").strip()
            sentiment = _check_sentiment(op.get("sentiment") or "", rid, TABSA_LABELS)
            if target.lower() not in text_tokens:
                log.warning("review %s: target %r not found in text, keeping entry", rid, target)
            if (target, category) in seen:
                log.warning("review %s: duplicate opinion on (%s, %s), keeping first", rid, target, category)
                continue
            seen.add((target, category))
            anns.append(Annotation(target=target, category=category, sentiment=sentiment))
        reviews.append(Review(id=rid, text=text, annotations=tuple(anns), split=split))
    targets = sorted({a.target for r in reviews for a in r.annotations if a.target})
    return Dataset(task="tabsa", categories=SENTIHOOD_CATEGORIES, reviews=reviews,
                   targets=tuple(targets))


def mentioned_targets(review: Review, target_vocab=()) -> list[str]:
    """Targets present in the review, by exact token match on the vocabulary.

    Annotated-but-undetected targets are appended so that unit enumeration
    always round-trips the annotation set (the loader has already warned
    about them).
    """
    lower_tokens = set(review.token_forms(lower=True))
    found = [t for t in target_vocab if t.lower() in lower_tokens]
    for ann in review.annotations:
        if ann.target is not None and ann.target not in found:
            found.append(ann.target)
    return found


def enumerate_units(dataset: Dataset, categories=None) -> list[ClassificationUnit]:
    """Expand a dataset into per-(target, category) classification units.

    ABSA yields |C| units per review; TABSA yields |C| units per target
    mentioned in the review.  Combinations without an annotation carry
    gold = 'none'.
    """
    categories = tuple(categories) if categories is not None else dataset.categories
    units: list[ClassificationUnit] = []
    for review in dataset.reviews:
        gold = {(a.target, a.category): a.sentiment for a in review.annotations}
        if dataset.task == "absa":
            for cat in categories:
                units.append(
                    ClassificationUnit(review.id, None, cat, gold.get((None, cat), "none"))
                )
        else:
            for target in mentioned_targets(review, dataset.targets):
                for cat in categories:
                    units.append(
                        ClassificationUnit(review.id, target, cat, gold.get((target, cat), "none"))
                    )
    return units


def implicit_aspect_fraction(dataset: Dataset) -> float:
    """Fraction of annotated (review, category) pairs whose category name
    never appears as a substring of the lowercase review text."""
    total = 0
    implicit = 0
    for review in dataset.reviews:
        low = review.text.lower()
        for ann in review.annotations:
            total += 1
            if ann.category not in low:
                implicit += 1
    return implicit / total if total else 0.0


# ---------------------------------------------------------------------------
# Canonical JSON-lines interchange


def review_to_record(review: Review) -> dict:
    return {
        "id": review.id,
        "text": review.text,
        "tokens": [
            {"i": t.index, "form": t.form, "lemma": t.lemma, "upos": t.upos,
             "head": t.head, "deprel": t.deprel}
            for t in review.tokens
        ],
        "annotations": [
            {"target": a.target, "category": a.category, "sentiment": a.sentiment}
            for a in review.annotations
        ],
        "split": review.split,
    }


def review_from_record(rec: dict) -> Review:
    tokens = tuple(
        ParsedToken(index=t["i"], form=t["form"], lemma=t.get("lemma"),
                    upos=t["upos"], head=t["head"], deprel=t["deprel"])
        for t in rec.get("tokens", [])
    )
    anns = tuple(
        Annotation(target=a.get("target"), category=a["category"], sentiment=a["sentiment"])
        for a in rec.get("annotations", [])
    )
    return Review(id=rec["id"], text=rec["text"], tokens=tokens, annotations=anns,
                  split=rec.get("split", "train"))


def save_dataset(dataset: Dataset, path) -> int:
    with open(path, "w", encoding="utf-8") as f:
        for review in dataset.reviews:
            f.write(json.dumps(review_to_record(review), ensure_ascii=False) + "\n")
    return len(dataset.reviews)


def load_dataset(path, task: str, categories=None) -> Dataset:
    if categories is None:
        categories = SEMEVAL_CATEGORIES if task == "absa" else SENTIHOOD_CATEGORIES
    reviews = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            try:
                reviews.append(review_from_record(json.loads(line)))
            except (json.JSONDecodeError, KeyError) as e:
                raise DataFormatError(f"{path}: bad record at line {line_no}: {e}") from e
    targets = sorted({a.target for r in reviews for a in r.annotations if a.target})
    return Dataset(task=task, categories=tuple(categories), reviews=reviews,
                   targets=tuple(targets))
