"""CoNLL-U reading and parse attachment.

Only the fields the modifier rules consume are kept: index, form, lemma,
UPOS, head, deprel.  Multiword-token ranges (ids like 3-4) and empty nodes
(ids like 5.1) are skipped, comments are honored for sentence ids.
"""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path
from typing import Iterable

from .corpus import Dataset, ParsedToken, Review
from .errors import AlignmentError, DataFormatError, ValidationError


def parse_conllu(text: str, source: str = "<string>") -> list[tuple[str | None, list[ParsedToken]]]:
    """Parse CoNLL-U text into (sent_id, tokens) pairs."""
    sentences: list[tuple[str | None, list[ParsedToken]]] = []
    sent_id: str | None = None
    tokens: list[ParsedToken] = []

    def flush():
        nonlocal sent_id, tokens
        if tokens:
            validate_tokens(tokens, sent_id or f"sentence {len(sentences) + 1}")
            sentences.append((sent_id, tokens))
        sent_id, tokens = None, []

    for line_no, line in enumerate(text.splitlines(), 1):
        line = line.rstrip("\n")
        if not line.strip():
            flush()
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("sent_id"):
                _, _, value = body.partition("=")
                sent_id = value.strip()
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise DataFormatError(f"{source}: line {line_no}: expected 10 tab-separated columns, got {len(cols)}")
        if "-" in cols[0] or "." in cols[0]:
            continue
        try:
            index = int(cols[0])
            head = int(cols[6])
        except ValueError as e:
            raise DataFormatError(f"{source}: line {line_no}: non-integer id/head: {e}") from e
        lemma = None if cols[2] in ("_", "") else cols[2]
        tokens.append(ParsedToken(index=index, form=cols[1], lemma=lemma,
                                  upos=cols[3], head=head, deprel=cols[7]))
    flush()
    return sentences


def validate_tokens(tokens: list[ParsedToken], label: str) -> None:
    n = len(tokens)
    roots = 0
    for pos, tok in enumerate(tokens, 1):
        if tok.index != pos:
            raise ValidationError(f"{label}: token ids not contiguous at position {pos}")
        if tok.head < 0 or tok.head > n:
            raise ValidationError(f"{label}: token {tok.index} has out-of-range head {tok.head}")
        if tok.head == tok.index:
            raise ValidationError(f"{label}: token {tok.index} is its own head")
        if tok.head == 0:
            roots += 1
    if roots != 1:
        raise ValidationError(f"{label}: expected exactly one root token, found {roots}")


def read_conllu(path) -> list[tuple[str | None, list[ParsedToken]]]:
    path = Path(path)
    return parse_conllu(path.read_text("utf-8"), source=str(path))


def attach_parses(dataset: Dataset, path) -> Dataset:
    """Replace each review's tokens with the aligned CoNLL-U sentence.

    Alignment is by sent_id when every sentence carries one, else by order.
    The operation is idempotent for a fixed file and returns a new Dataset
    (reviews are rebuilt, the input is left untouched).
    """
    parsed = read_conllu(path)
    reviews = dataset.reviews
    if len(parsed) != len(reviews):
        first = _first_unmatched(reviews, parsed)
        raise AlignmentError(
            f"{path}: {len(parsed)} parsed sentences for {len(reviews)} reviews; "
            f"first unmatched id: {first}"
        )

    by_id = {sid: toks for sid, toks in parsed if sid is not None}
    use_ids = len(by_id) == len(parsed)
    new_reviews: list[Review] = []
    for pos, review in enumerate(reviews):
        if use_ids:
            if review.id not in by_id:
                raise AlignmentError(f"{path}: no parsed sentence with id {review.id!r}")
            toks = by_id[review.id]
        else:
            toks = parsed[pos][1]
        new_reviews.append(replace(review, tokens=tuple(toks)))
    return Dataset(task=dataset.task, categories=dataset.categories,
                   reviews=new_reviews, targets=dataset.targets)


def _first_unmatched(reviews: Iterable[Review], parsed) -> str:
    parsed_ids = {sid for sid, _ in parsed if sid is not None}
    for review in reviews:
        if review.id not in parsed_ids:
            return review.id
    return "<order mismatch>"


def format_conllu(sent_id: str, tokens: Iterable[ParsedToken], text: str | None = None) -> str:
    """Render tokens as a CoNLL-U block (used by fixture generators)."""
    lines = [f"# sent_id = {sent_id}"]
    if text is not None:
        lines.append(f"# text = {text}")
    for t in tokens:
        lines.append("\t".join([
            str(t.index), t.form, t.lemma or "_", t.upos, "_", "_",
            str(t.head), t.deprel, "_", "_",
        ]))
    return "\n".join(lines) + "\n\n"
