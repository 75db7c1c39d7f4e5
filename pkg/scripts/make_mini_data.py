#!/usr/bin/env python3
"""Regenerate the bundled mini datasets under data/mini/.

The sentences are template-expanded so their dependency parses are correct
by construction; the raw files exercise the real input formats (SemEval-style
XML, SentiHood-style JSON, CoNLL-U).  Deterministic: fixed seed, stable
ordering.  Run from the repo root:  python3 scripts/make_mini_data.py
"""

from __future__ import annotations

import json
import random
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "data" / "mini"

SEMEVAL_WORDS = {
    "food": (["sushi", "pasta", "pizza", "steak", "dessert", "bread", "salad", "soup", "coffee"],
             ["delicious", "tasty", "fresh", "flavorful", "yummy"],
             ["bland", "stale", "greasy", "overcooked", "tasteless"]),
    "price": (["bill", "prices", "check", "cost", "tab"],
              ["reasonable", "cheap", "fair", "affordable"],
              ["expensive", "overpriced", "steep", "outrageous"]),
    "service": (["waiter", "staff", "service", "waitress", "server"],
                ["friendly", "attentive", "helpful", "courteous"],
                ["rude", "slow", "inattentive", "dismissive"]),
    "ambience": (["decor", "atmosphere", "music", "lighting", "room"],
                 ["cozy", "charming", "elegant", "warm"],
                 ["noisy", "cramped", "dingy", "loud"]),
    "anecdotes": (["birthday", "anniversary", "evening", "visit", "celebration"],
                  ["memorable", "wonderful", "perfect", "lovely"],
                  ["disappointing", "awful", "dreadful", "forgettable"]),
}

SENTIHOOD_WORDS = {
    "price": (["rent", "prices", "housing", "flats", "cost"],
              ["affordable", "cheap", "reasonable"],
              ["expensive", "unaffordable", "steep"]),
    "transit-location": (["station", "tube", "buses", "trains", "commute"],
                         ["convenient", "quick", "reliable"],
                         ["unreliable", "slow", "awful"]),
    "safety": (["crime", "streets", "police", "night", "muggings"],
               ["safe", "secure", "calm"],
               ["dangerous", "scary", "rough"]),
    "general": (["area", "neighbourhood", "place", "community", "vibe"],
                ["lovely", "vibrant", "pleasant"],
                ["grim", "dull", "horrible"]),
}

OUTLIER_ADVERBS = ["shockingly", "surprisingly", "genuinely", "weirdly"]


def tok(i, form, upos, head, deprel, lemma=None):
    return {"i": i, "form": form, "upos": upos, "head": head, "deprel": deprel,
            "lemma": lemma or form.lower()}


def t_copula(noun, adj):
    """The {noun} was {adj} ."""
    text = f"The {noun} was {adj} ."
    toks = [tok(1, "The", "DET", 2, "det"), tok(2, noun, "NOUN", 4, "nsubj"),
            tok(3, "was", "AUX", 4, "cop"), tok(4, adj, "ADJ", 0, "root"),
            tok(5, ".", "PUNCT", 4, "punct")]
    return text, toks


def t_loved(verb, adj, noun):
    """I {verb} the {adj} {noun} ."""
    text = f"I {verb} the {adj} {noun} ."
    toks = [tok(1, "I", "PRON", 2, "nsubj"), tok(2, verb, "VERB", 0, "root"),
            tok(3, "the", "DET", 5, "det"), tok(4, adj, "ADJ", 5, "amod"),
            tok(5, noun, "NOUN", 2, "obj"), tok(6, ".", "PUNCT", 2, "punct")]
    return text, toks


def t_two_clauses(n1, a1, n2, a2, conj="and"):
    """The {n1} was {a1} and the {n2} was {a2} ."""
    text = f"The {n1} was {a1} {conj} the {n2} was {a2} ."
    cc = "CCONJ"
    toks = [tok(1, "The", "DET", 2, "det"), tok(2, n1, "NOUN", 4, "nsubj"),
            tok(3, "was", "AUX", 4, "cop"), tok(4, a1, "ADJ", 0, "root"),
            tok(5, conj, cc, 9, "cc"), tok(6, "the", "DET", 7, "det"),
            tok(7, n2, "NOUN", 9, "nsubj"), tok(8, "was", "AUX", 9, "cop"),
            tok(9, a2, "ADJ", 4, "conj"), tok(10, ".", "PUNCT", 4, "punct")]
    return text, toks


def t_fragment(adv, adj, noun):
    """{Adv} {adj} {noun} ."""
    text = f"{adv.capitalize()} {adj} {noun} ."
    toks = [tok(1, adv.capitalize(), "ADV", 2, "advmod", lemma=adv),
            tok(2, adj, "ADJ", 3, "amod"), tok(3, noun, "NOUN", 0, "root"),
            tok(4, ".", "PUNCT", 3, "punct")]
    return text, toks


def t_filler(rng):
    choices = [
        ("We went there last week .",
         [tok(1, "We", "PRON", 2, "nsubj"), tok(2, "went", "VERB", 0, "root"),
          tok(3, "there", "ADV", 2, "advmod"), tok(4, "last", "ADJ", 5, "amod"),
          tok(5, "week", "NOUN", 2, "obl"), tok(6, ".", "PUNCT", 2, "punct")]),
        ("My cousin recommended it .",
         [tok(1, "My", "PRON", 2, "nmod"), tok(2, "cousin", "NOUN", 3, "nsubj"),
          tok(3, "recommended", "VERB", 0, "root"), tok(4, "it", "PRON", 3, "obj"),
          tok(5, ".", "PUNCT", 3, "punct")]),
    ]
    return choices[rng.randrange(len(choices))]


def t_target_copula(target, adj):
    """{target} is {adj} ."""
    text = f"{target} is {adj} ."
    toks = [tok(1, target, "PROPN", 3, "nsubj", lemma=target),
            tok(2, "is", "AUX", 3, "cop"), tok(3, adj, "ADJ", 0, "root"),
            tok(4, ".", "PUNCT", 3, "punct")]
    return text, toks


def t_target_noun(noun, target, adj):
    """The {noun} in {target} is {adj} ."""
    text = f"The {noun} in {target} is {adj} ."
    toks = [tok(1, "The", "DET", 2, "det"), tok(2, noun, "NOUN", 6, "nsubj"),
            tok(3, "in", "ADP", 4, "case"), tok(4, target, "PROPN", 2, "nmod", lemma=target),
            tok(5, "is", "AUX", 6, "cop"), tok(6, adj, "ADJ", 0, "root"),
            tok(7, ".", "PUNCT", 6, "punct")]
    return text, toks


def t_two_targets(a1, a2):
    """LOC1 is {a1} but LOC2 is {a2} ."""
    text = f"LOC1 is {a1} but LOC2 is {a2} ."
    toks = [tok(1, "LOC1", "PROPN", 3, "nsubj", lemma="LOC1"),
            tok(2, "is", "AUX", 3, "cop"), tok(3, a1, "ADJ", 0, "root"),
            tok(4, "but", "CCONJ", 7, "cc"),
            tok(5, "LOC2", "PROPN", 7, "nsubj", lemma="LOC2"),
            tok(6, "is", "AUX", 7, "cop"), tok(7, a2, "ADJ", 3, "conj"),
            tok(8, ".", "PUNCT", 3, "punct")]
    return text, toks


def pick_sentiment(rng, words, cat):
    nouns, pos, neg = words[cat]
    if rng.random() < 0.55:
        return rng.choice(pos), "positive"
    return rng.choice(neg), "negative"


def gen_semeval(rng, n, id_prefix):
    """Yield (id, text, tokens, [(category, polarity)])."""
    cats = list(SEMEVAL_WORDS)
    out = []
    for i in range(n):
        rid = f"{id_prefix}{i + 1:03d}"
        roll = rng.random()
        if roll < 0.12:
            text, toks = t_filler(rng)
            out.append((rid, text, toks, []))
            continue
        cat = cats[i % len(cats)]
        nouns, pos, neg = SEMEVAL_WORDS[cat]
        noun = rng.choice(nouns)
        adj, polarity = pick_sentiment(rng, SEMEVAL_WORDS, cat)
        if roll < 0.32:
            cat2 = cats[(i + 1 + rng.randrange(len(cats) - 1)) % len(cats)]
            if cat2 == cat:
                cat2 = cats[(cats.index(cat) + 1) % len(cats)]
            noun2 = rng.choice(SEMEVAL_WORDS[cat2][0])
            adj2, polarity2 = pick_sentiment(rng, SEMEVAL_WORDS, cat2)
            text, toks = t_two_clauses(noun, adj, noun2, adj2)
            out.append((rid, text, toks, [(cat, polarity), (cat2, polarity2)]))
        elif roll < 0.45:
            verb = "loved" if polarity == "positive" else "hated"
            text, toks = t_loved(verb, adj, noun)
            out.append((rid, text, toks, [(cat, polarity)]))
        elif roll < 0.55:
            text, toks = t_fragment(rng.choice(OUTLIER_ADVERBS), adj, noun)
            out.append((rid, text, toks, [(cat, polarity)]))
        elif roll < 0.62:
            # conflicting opinions on one aspect
            nouns_, pos_, neg_ = SEMEVAL_WORDS[cat]
            text, toks = t_two_clauses(noun, rng.choice(pos_), rng.choice(nouns_), rng.choice(neg_), conj="but")
            out.append((rid, text, toks, [(cat, "conflict")]))
        else:
            text, toks = t_copula(noun, adj)
            out.append((rid, text, toks, [(cat, polarity)]))
    return out


def gen_sentihood(rng, n, id_prefix):
    """Yield (id, text, tokens, [(target, category, polarity)])."""
    cats = list(SENTIHOOD_WORDS)
    out = []
    for i in range(n):
        rid = f"{id_prefix}{i + 1:03d}"
        cat = cats[i % len(cats)]
        nouns, pos, neg = SENTIHOOD_WORDS[cat]
        adj, polarity = pick_sentiment(rng, SENTIHOOD_WORDS, cat)
        roll = rng.random()
        if roll < 0.25:
            cat2 = cats[(i + 1 + rng.randrange(len(cats) - 1)) % len(cats)]
            if cat2 == cat:
                cat2 = cats[(cats.index(cat) + 1) % len(cats)]
            adj2, polarity2 = pick_sentiment(rng, SENTIHOOD_WORDS, cat2)
            text, toks = t_two_targets(adj, adj2)
            out.append((rid, text, toks, [("LOC1", cat, polarity), ("LOC2", cat2, polarity2)]))
        elif roll < 0.6:
            target = "LOC1" if rng.random() < 0.7 else "LOC2"
            text, toks = t_target_noun(rng.choice(nouns), target, adj)
            out.append((rid, text, toks, [(target, cat, polarity)]))
        else:
            target = "LOC1" if rng.random() < 0.7 else "LOC2"
            text, toks = t_target_copula(target, adj)
            out.append((rid, text, toks, [(target, cat, polarity)]))
    return out


def write_semeval_xml(records, path):
    root = ET.Element("sentences")
    for rid, text, _toks, anns in records:
        s = ET.SubElement(root, "sentence", id=rid)
        ET.SubElement(s, "text").text = text
        cats = ET.SubElement(s, "aspectCategories")
        for cat, polarity in anns:
            name = "anecdotes/miscellaneous" if cat == "anecdotes" else cat
            ET.SubElement(cats, "aspectCategory", category=name, polarity=polarity)
    ET.indent(root)
    ET.ElementTree(root).write(path, encoding="utf-8", xml_declaration=True)
    path.write_bytes(path.read_bytes() + b"\n")


def write_sentihood_json(records, path):
    entries = []
    for rid, text, _toks, anns in records:
        entries.append({
            "id": rid,
            "text": text,
            "opinions": [
                {"target_entity": target, "aspect": cat, "sentiment": polarity.capitalize()}
                for target, cat, polarity in anns
            ],
        })
    path.write_text(json.dumps(entries, indent=2) + "\n", encoding="utf-8")


def write_conllu(records, path):
    blocks = []
    for rid, text, toks, _anns in records:
        lines = [f"# sent_id = {rid}", f"# text = {text}"]
        for t in toks:
            lines.append("\t".join([str(t["i"]), t["form"], t["lemma"], t["upos"],
                                    "_", "_", str(t["head"]), t["deprel"], "_", "_"]))
        blocks.append("\n".join(lines))
    path.write_text("\n\n".join(blocks) + "\n", encoding="utf-8")


def main() -> int:
    rng = random.Random(777)
    OUT.mkdir(parents=True, exist_ok=True)

    train = gen_semeval(rng, 50, "ra")
    test = gen_semeval(rng, 20, "re")
    write_semeval_xml(train, OUT / "semeval_train.xml")
    write_semeval_xml(test, OUT / "semeval_test.xml")
    write_conllu(train, OUT / "semeval_train.conllu")
    write_conllu(test, OUT / "semeval_test.conllu")

    train = gen_sentihood(rng, 50, "ha")
    test = gen_sentihood(rng, 20, "he")
    write_sentihood_json(train, OUT / "sentihood_train.json")
    write_sentihood_json(test, OUT / "sentihood_test.json")
    write_conllu(train, OUT / "sentihood_train.conllu")
    write_conllu(test, OUT / "sentihood_test.conllu")
    print(f"mini datasets written under {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
