#!/usr/bin/env python3
"""Generate the small debate fixture under data/fixtures (corpus, gold, embeddings)."""

import json
import math
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "data" / "fixtures"

TOPICS = [
    ("climate-human", "Is climate change caused by human activity?", {
        "agree": ["carbon dioxide", "fossil fuels", "greenhouse gases", "emissions", "deforestation", "co2",
                  "scientists", "temperature"],
        "disagree": ["solar activity", "sunspots", "carbon dioxide", "climate models", "ice age", "weather",
                     "scientists", "temperature"],
    }),
    ("carbon-tax", "Should governments introduce a carbon tax?", {
        "agree": ["carbon tax", "carbon emissions", "renewable energy", "pollution", "energy efficiency",
                  "fossil fuels", "clean energy"],
        "disagree": ["carbon tax", "energy", "coal", "agriculture", "emissions", "cap and trade", "oil"],
    }),
    ("nuclear", "Is nuclear power the answer to global warming?", {
        "agree": ["nuclear power", "global warming", "co2", "coal", "energy", "air pollution"],
        "disagree": ["nuclear power", "renewable energy", "wind power", "solar power", "climate change",
                     "environment"],
    }),
]

OPENERS = [
    "{a} is the central issue here.",
    "The evidence on {a} is clear to me.",
    "Everyone talks about {a} these days.",
]
BODIES = [
    "Studies link {a} to {b} over the last century.",
    "{a} keeps rising while {b} gets ignored.",
    "People rarely connect {a} with {b} in public debate.",
    "Reports on {a} mention {b} again and again.",
    "We cannot discuss {a} without {b}.",
    "My neighbour worries about {a} more than anything.",
    "The data on {a} looks worse every year.",
    "Nobody in my town cares about this at all.",
    "I read a long article about it last week.",
    "That argument has been made many times before.",
]
ADVERBS = ["However", "Therefore", "Moreover", "Consequently", "Furthermore", "Thus", "Hence", "Meanwhile"]


def sentence(rng, terms, first):
    a, b = rng.sample(terms, 2)
    template = rng.choice(OPENERS) if first else rng.choice(BODIES)
    text = template.format(a=a, b=b)
    if not first and rng.random() < 0.2:
        text = rng.choice(ADVERBS) + ", " + text[0].lower() + text[1:]
    return text[0].upper() + text[1:]


def main():
    rng = random.Random(20240611)
    topics, gold = [], []
    vocab = set()
    for tid, title, side_terms in TOPICS:
        comments = []
        for side in ("agree", "disagree"):
            for c in range(5):
                cid = f"{tid}-{side[0]}{c + 1}"
                n = rng.randint(5, 9)
                sentences = []
                for i in range(n):
                    text = sentence(rng, side_terms[side], i == 0)
                    sentences.append({"id": f"{cid}-s{i + 1}", "position": i + 1, "text": text})
                    vocab.update(w.strip(".,").lower() for w in text.split())
                comments.append({"id": cid, "side": side, "sentences": sentences})
                k = max(1, math.ceil(0.2 * n - 1e-9))
                for annotator in ("ann1", "ann2"):
                    picks = [sentences[0]["id"]]
                    rest = [s["id"] for s in sentences[1:]]
                    picks += rng.sample(rest, k - 1)
                    if annotator == "ann2" and rng.random() < 0.3:
                        picks = rng.sample([s["id"] for s in sentences], k)
                    gold.append({"annotator_id": annotator, "comment_id": cid, "selected": sorted(picks)})
        topics.append({"id": tid, "title": title, "comments": comments})
        vocab.update(w.strip("?").lower() for w in title.split())

    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "corpus.json").write_text(json.dumps({"topics": topics}, indent=2) + "\n")
    (OUT / "gold.json").write_text(json.dumps({"annotations": gold}, indent=2) + "\n")

    dim = 8
    lines = [f"{len(vocab)} {dim}"]
    for word in sorted(vocab):
        lines.append(word + " " + " ".join(f"{rng.gauss(0, 1):.4f}" for _ in range(dim)))
    (OUT / "embeddings.txt").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
