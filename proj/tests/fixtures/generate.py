#!/usr/bin/env python3
"""Regenerates the small test fixtures in this directory.

Outputs (all deterministic):
  planted_questions.jsonl  20 single-sentence ARC-style questions
  planted_corpus.txt       one supporting sentence per question plus fillers
  essential_terms.tsv      the 20 stems with per-token 1-5 ratings
  entailment.jsonl         50 premise/hypothesis pairs (25 entails)
  embeddings.txt           16-d vectors for every fixture word
"""
import json
import random
import re
from pathlib import Path

HERE = Path(__file__).resolve().parent

# stem, answer, distractors, supporting sentence
ITEMS = [
    ("Which gas do plants absorb from the air?", "carbon dioxide", ["helium", "neon", "argon"],
     "Plants absorb carbon dioxide gas from the air."),
    ("Which organ pumps blood through the body?", "heart", ["lung", "kidney", "stomach"],
     "The heart organ pumps blood through the body."),
    ("What force pulls objects toward the Earth?", "gravity", ["friction", "magnetism", "tension"],
     "Gravity is the force that pulls objects toward the Earth."),
    ("Which planet is closest to the Sun?", "Mercury", ["Jupiter", "Saturn", "Neptune"],
     "Mercury is the planet closest to the Sun."),
    ("What process turns liquid water into vapor?", "evaporation", ["condensation", "freezing", "melting"],
     "Evaporation is the process that turns liquid water into vapor."),
    ("Which part of the cell contains genetic material?", "nucleus", ["membrane", "ribosome", "vacuole"],
     "The nucleus is the part of the cell that contains genetic material."),
    ("What do bees collect from flowers?", "nectar", ["sand", "pebbles", "salt"],
     "Bees collect nectar from flowers."),
    ("Which layer of rock forms from cooled lava?", "basalt", ["limestone", "marble", "shale"],
     "Basalt is a layer of rock that forms from cooled lava."),
    ("What instrument measures air pressure?", "barometer", ["thermometer", "ruler", "compass"],
     "A barometer is an instrument that measures air pressure."),
    ("Which animal lays eggs and has feathers?", "bird", ["mammal", "insect", "reptile"],
     "A bird is an animal that lays eggs and has feathers."),
    ("What energy source comes from moving wind?", "turbines", ["coal", "diesel", "uranium"],
     "Wind turbines capture the energy source that comes from moving wind."),
    ("Which tissue connects muscles to bones?", "tendon", ["cartilage", "skin", "enamel"],
     "A tendon is the tissue that connects muscles to bones."),
    ("What causes the tides in the ocean?", "moon", ["whales", "volcanoes", "storms"],
     "The pull of the moon causes the tides in the ocean."),
    ("Which mineral makes bones strong?", "calcium", ["sodium", "iron", "zinc"],
     "Calcium is the mineral that makes bones strong."),
    ("What do roots absorb from the soil?", "nutrients", ["sunlight", "oxygen", "pollen"],
     "Roots absorb water and nutrients from the soil."),
    ("Which state of matter has a fixed shape?", "solid", ["liquid", "gas", "plasma"],
     "A solid is the state of matter that has a fixed shape."),
    ("What tool magnifies very small organisms?", "microscope", ["telescope", "hammer", "scale"],
     "A microscope is a tool that magnifies very small organisms."),
    ("Which season has the longest daylight hours?", "summer", ["winter", "autumn", "spring"],
     "Summer is the season that has the longest daylight hours."),
    ("What metal is attracted to a magnet?", "iron", ["copper", "gold", "aluminum"],
     "Iron is a metal that is attracted to a magnet."),
    ("Which blood cells fight infection?", "white", ["red", "platelet", "plasma"],
     "White blood cells fight infection."),
]

FILLERS = [
    "Helium is a light noble element used in balloons.",
    "Neon signs glow in many colors.",
    "Argon is common in light bulbs.",
    "The kidney filters waste.",
    "Jupiter is a giant planet with many moons.",
    "Friction slows sliding surfaces.",
    "Condensation forms droplets on a cold glass.",
    "A thermometer reads temperature.",
    "Copper wires carry electric current.",
    "Limestone often contains fossils.",
]

FUNCTION_WORDS = {
    "which", "what", "do", "does", "from", "the", "is", "to", "of", "a", "and", "has", "in",
    "through", "toward", "into",
}
# Moderately important words get rating 3 so both sides of the threshold appear.
MID_WORDS = {"air", "body", "objects", "part", "very", "small", "longest"}


def tokens(text):
    return [t.lower() for t in re.split(r"[^0-9A-Za-z]+", text) if t]


def rating(tok, rng):
    if tok in FUNCTION_WORDS:
        return rng.choice([1, 2])
    if tok in MID_WORDS:
        return 3
    return rng.choice([4, 5])


def main():
    rng = random.Random(20261015)
    labels = "ABCD"
    questions, corpus, et_lines = [], [], []
    for n, (stem, answer, distractors, support) in enumerate(ITEMS):
        options = [answer] + distractors
        order = list(range(4))
        rng.shuffle(order)
        choices = [{"label": labels[i], "text": options[o]} for i, o in enumerate(order)]
        key = labels[order.index(0)]
        questions.append({"id": f"planted-{n:02d}", "question": {"stem": stem, "choices": choices},
                          "answerKey": key})
        corpus.append(support)
        toks = tokens(stem)
        et_lines.append(" ".join(toks) + "\t" + " ".join(str(rating(t, rng)) for t in toks))
    corpus.extend(FILLERS)

    (HERE / "planted_questions.jsonl").write_text("".join(json.dumps(q) + "\n" for q in questions))
    (HERE / "planted_corpus.txt").write_text("".join(s + "\n" for s in corpus))
    (HERE / "essential_terms.tsv").write_text("".join(l + "\n" for l in et_lines))

    # Synthetic entailment: entails iff the hypothesis is a sub-bag of the premise.
    vocab = sorted({t for s in corpus for t in tokens(s)} - FUNCTION_WORDS)
    pairs = []
    for n in range(50):
        premise = rng.sample(vocab, rng.randint(5, 7))
        size = rng.randint(2, 3)
        if n % 2 == 0:
            hyp = rng.sample(premise, size)
            label = "entails"
        else:
            outside = [w for w in vocab if w not in premise]
            hyp = rng.sample(premise, size - 1) + rng.sample(outside, 1)
            rng.shuffle(hyp)
            label = "neutral"
        pairs.append({"premise": " ".join(premise), "hypothesis": " ".join(hyp), "label": label})
    (HERE / "entailment.jsonl").write_text("".join(json.dumps(p) + "\n" for p in pairs))

    words = set()
    for s in corpus + [q["question"]["stem"] for q in questions]:
        words.update(tokens(s))
    for q in questions:
        for c in q["question"]["choices"]:
            words.update(tokens(c["text"]))
    # Function words share an offset along one direction, roughly what
    # distributional vectors do; isotropic noise alone is not separable in 16-d.
    lines = []
    for w in sorted(words):
        vec = [rng.gauss(0.0, 0.5) for _ in range(16)]
        vec[0] += 0.75 if w in FUNCTION_WORDS else -0.75
        lines.append(w + " " + " ".join(f"{v:.6f}" for v in vec))
    (HERE / "embeddings.txt").write_text("".join(l + "\n" for l in lines))


if __name__ == "__main__":
    main()
