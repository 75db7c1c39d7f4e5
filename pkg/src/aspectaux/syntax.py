"""Opinion-modifier extraction from dependency graphs.

Three rules, applied to a noun candidate token:

  R1 AMOD            adjectives attached to the candidate via amod
                     ("very delicious sushi" -> delicious)
  R2 NSUBJ_ADJ       the adjectival predicate of which the candidate is the
                     nominal subject ("The sushi is yummy" -> yummy)
  R3 ADVMOD_OUTLIER  content adverbs attached via advmod to any modifier
                     found by R1/R2 ("Genetically modified food" ->
                     Genetically, riding on the R1 hit "modified")

R3 is exactly one hop off the R1/R2 set; there is no deeper closure.
Intensity-only adverbs (very, quite, ...) never qualify as outliers: they
grade an opinion word rather than carry one, so "very delicious sushi"
yields just delicious.  The rules are otherwise parser-agnostic: they read
nothing but indices, UPOS tags and (base) relation labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .corpus import ParsedToken
from .errors import ValidationError

NOUN_TAGS = frozenset({"NOUN", "PROPN"})
ADJ_TAG = "ADJ"
ADV_TAG = "ADV"

# Closed class of pure degree/intensity adverbs, ineligible for R3.
DEGREE_ADVERBS = frozenset({
    "very", "too", "so", "quite", "really", "extremely", "incredibly",
    "unbelievably", "absolutely", "totally", "completely", "highly",
    "fairly", "rather", "somewhat", "pretty", "super", "utterly",
    "terribly", "enough", "much", "more", "most", "less", "least",
})


class Rule(str, Enum):
    AMOD = "amod"
    NSUBJ_ADJ = "nsubj_adj"
    ADVMOD_OUTLIER = "advmod_outlier"


@dataclass(frozen=True)
class ModifierHit:
    modifier: ParsedToken
    rule: Rule
    anchor: ParsedToken  # the candidate (R1/R2) or the modifier that licensed an R3 hit


def _base_rel(deprel: str) -> str:
    return deprel.split(":", 1)[0]


def modifiers_for(tokens: Sequence[ParsedToken], candidate_index: int) -> list[ModifierHit]:
    """Collect modifier hits for one candidate token, in sentence order.

    Returns an empty list when no rule fires.  Output is deduplicated by
    token index, preferring the earlier rule (R1/R2 over R3).
    """
    by_index = {t.index: t for t in tokens}
    if candidate_index not in by_index:
        raise ValidationError(f"candidate index {candidate_index} not in graph (1..{len(tokens)})")
    candidate = by_index[candidate_index]

    hits: dict[int, ModifierHit] = {}
    if candidate.upos in NOUN_TAGS:
        # R1: adjectival amod dependents of the candidate
        for t in tokens:
            if t.head == candidate_index and _base_rel(t.deprel) == "amod" and t.upos == ADJ_TAG:
                hits[t.index] = ModifierHit(modifier=t, rule=Rule.AMOD, anchor=candidate)
        # R2: the candidate is the nominal subject of an adjectival predicate
        if _base_rel(candidate.deprel) == "nsubj" and candidate.head != 0:
            head = by_index.get(candidate.head)
            if head is not None and head.upos == ADJ_TAG and head.index not in hits:
                hits[head.index] = ModifierHit(modifier=head, rule=Rule.NSUBJ_ADJ, anchor=candidate)

    # R3: content adverbs hanging off the modifiers found above, one hop only
    anchors = list(hits.values())
    for hit in anchors:
        for t in tokens:
            if (t.head == hit.modifier.index and _base_rel(t.deprel) == "advmod"
                    and t.upos == ADV_TAG and t.form.lower() not in DEGREE_ADVERBS
                    and t.index not in hits):
                hits[t.index] = ModifierHit(modifier=t, rule=Rule.ADVMOD_OUTLIER,
                                            anchor=hit.modifier)

    return [hits[i] for i in sorted(hits)]
