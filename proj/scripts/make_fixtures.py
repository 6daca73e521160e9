#!/usr/bin/env python3
"""Regenerates the synthetic corpora under data/fixtures/.

Everything is deterministic. The e2e corpus plants structure the pipeline
must recover: two vocabulary clusters, a sentiment flip halfway through, a
frequency step, and a one-day frequency spike on a date with a known policy
event. The script verifies the planted signals against its own reference
detectors before writing anything.
"""

import json
import math
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURES = os.path.join(HERE, "..", "data", "fixtures")

# ---------------------------------------------------------------- seedex ---

SEEDEX_VECTORS = {
    "impfung": [1, 0, 0, 0],
    "impfstoff": [3, 4, 0, 0],   # cosine exactly 3/5 = 0.6
    "impfpflicht": [4, 3, 0, 0],
    "impfen": [1, 1, 0, 0],
    "geimpft": [2, 1, 0, 0],
    "infektion": [7, 1, 0, 0],
    "booster": [5, 4, 0, 0],
    "corona": [4, 5, 0, 0],
    "spritze": [6, 1, 1, 0],
    "schutz": [9, 2, 0, 0],
    "maske": [0, 1, 0, 0],
    "termin": [1, 2, 0, 0],
    "kind": [0, 2, 1, 0],
    "freiheit": [1, 3, 0, 0],
    "virus": [1, 4, 0, 0],
    "arzt": [1, 1, 1, 1],
    "apotheke": [2, 3, 0, 0],
    "studie": [0, 0, 1, 0],
    "zneutral": [0, 0, 0, 1],
    "nullwort": [0, 0, 0, 0],    # zero vector: similarity undefined
}

# term -> number of documents that contain it alongside the query
SEEDEX_DOC_COUNTS = {
    "impfstoff": 30,
    "impfpflicht": 30,
    "infektion": 25,
    "maske": 22,
    "geimpft": 20,
    "termin": 18,
    "booster": 15,
    "corona": 12,
    "nullwort": 11,
    "spritze": 10,
    "arzt": 9,
    "schutz": 8,
    "apotheke": 7,
    "freiheit": 6,
    "impfen": 5,
    "virus": 4,
    "kind": 3,
    "studie": 2,
    "zneutral": 1,
}


def cosine(a, b):
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(x * x for x in b))
    if na == 0 or nb == 0:
        return None
    return dot / (na * nb)


def make_seedex():
    out_dir = os.path.join(FIXTURES, "seedex")
    os.makedirs(out_dir, exist_ok=True)

    with open(os.path.join(out_dir, "embeddings.txt"), "w", encoding="utf-8") as fh:
        fh.write(f"{len(SEEDEX_VECTORS)} 4\n")
        for token, vec in SEEDEX_VECTORS.items():
            fh.write(token + " " + " ".join(str(v) for v in vec) + "\n")

    lines = []
    for i in range(50):
        words = ["die", "impfung", "und"]
        for term, count in SEEDEX_DOC_COUNTS.items():
            if i < count:
                words.append(term)
        words.append("heute")
        hashtags = []
        if i in (47, 48, 49):
            # the query reachable through the hashtag only
            words = [w for w in words if w != "impfung"]
            hashtags = ["impfung"]
        rec = {
            "id": f"s{i:03d}",
            "created_at": f"2021-02-{(i % 28) + 1:02d}T12:00:00Z",
            "lang": "de",
            "text": " ".join(words),
            "hashtags": hashtags,
        }
        lines.append(json.dumps(rec, ensure_ascii=False))
    with open(os.path.join(out_dir, "corpus.jsonl"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")

    expected = []
    for term, count in SEEDEX_DOC_COUNTS.items():
        sim = cosine(SEEDEX_VECTORS["impfung"], SEEDEX_VECTORS[term])
        if sim is not None and sim >= 0.6:
            expected.append((term, count, sim))
    expected.sort(key=lambda e: (-e[1], e[0]))
    print("seedex expected ranking:")
    for term, count, sim in expected:
        print(f"  {term} cooccurrence={count} similarity={sim!r}")


# ------------------------------------------------------------------- e2e ---

DAYS = 151          # 2021-01-01 .. 2021-05-31
SPIKE_DAY = 73      # 2021-03-15, AstraZeneca halt in the events table
STEP_DAY = 104      # 2021-04-15
SPIKE_EXTRA = 50

GROUP_A_CORE = ["nebenwirkung", "fieber", "symptome", "myokarditis", "reaktion"]
GROUP_B_CORE = ["impfpflicht", "freiheit", "grundrechte", "lockdown", "demokratie"]
COMMON_WORDS = ["impfstoff", "geimpft", "booster", "infektion"]

GROUP_A_POOL = [
    "kopfschmerz", "müdigkeit", "schwindel", "übelkeit", "fieberschub",
    "schüttelfrost", "armschmerz", "rötung", "schwellung", "unwohlsein",
    "abgeschlagenheit", "gliederschmerz", "juckreiz", "ausschlag", "herzrasen",
    "atemnot", "kreislauf", "blutdruck", "thrombose", "gerinnsel",
    "entzündung", "impfreaktion", "beschwerden", "krankschreibung", "wartezeit",
    "beobachtung", "untersuchung", "nachsorge", "schonung", "erholung",
]
GROUP_B_POOL = [
    "verfassung", "widerstand", "protestzug", "kundgebung", "versammlung",
    "petition", "bürgerrecht", "menschenrecht", "selbstbestimmung", "entscheidung",
    "verantwortung", "gesellschaft", "spaltung", "ausgrenzung", "diskriminierung",
    "überwachung", "bevormundung", "zwangsmaßnahme", "verordnung", "auflage",
    "beschränkung", "verbote", "regelwerk", "massnahme", "politikum",
    "debatte", "diskussion", "meinung", "haltung", "parlament",
]


def base_count(t):
    if t < STEP_DAY:
        return 2 + t // 30
    return 11 + (t - STEP_DAY) // 15


def day_counts():
    counts = [base_count(t) for t in range(DAYS)]
    counts[SPIKE_DAY] += SPIKE_EXTRA
    return counts


def reference_pelt(values, penalty):
    """Unpruned optimal-partition dynamic program, L2 cost."""
    n = len(values)
    prefix = [0.0] * (n + 1)
    prefix_sq = [0.0] * (n + 1)
    for i, v in enumerate(values):
        prefix[i + 1] = prefix[i] + v
        prefix_sq[i + 1] = prefix_sq[i] + v * v

    def cost(s, t):
        length = t - s
        seg = prefix[t] - prefix[s]
        return (prefix_sq[t] - prefix_sq[s]) - seg * seg / length

    best = [math.inf] * (n + 1)
    prev = [0] * (n + 1)
    best[0] = 0.0
    for t in range(1, n + 1):
        for s in range(t):
            v = best[s] + cost(s, t) + penalty
            if v < best[t]:
                best[t] = v
                prev[t] = s
    bounds = []
    t = n
    while t > 0:
        bounds.append(t)
        t = prev[t]
    return sorted(bounds)


def reference_peaks(values, multiplier=1.5):
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    sd = math.sqrt(var)
    upper = (mean + sd) + multiplier * abs(mean + sd)
    lower = (mean - sd) - multiplier * abs(mean - sd)
    return [i for i, v in enumerate(values) if v > upper or v < lower]


def make_e2e():
    out_dir = os.path.join(FIXTURES, "e2e")
    os.makedirs(out_dir, exist_ok=True)
    rng = random.Random(20210101)

    # --- word vectors, dim 8 ---
    vectors = {}
    e = lambda axis, scale: [scale if i == axis else 0.0 for i in range(8)]
    vectors["impfung"] = e(0, 4.0)
    vectors["impfstoff"] = [4.0, 0.3, 0.2, 0, 0, 0, 0, 0]
    vectors["geimpft"] = [4.0, -0.2, 0.3, 0, 0, 0, 0, 0]
    vectors["booster"] = [4.0, 0.1, -0.3, 0, 0, 0, 0, 0]
    vectors["infektion"] = [4.0, 0.4, -0.1, 0, 0, 0, 0, 0]
    for w in GROUP_A_CORE:
        vectors[w] = [0.0, 4.0] + [round(rng.uniform(-0.2, 0.2), 3) for _ in range(6)]
    for w in GROUP_B_CORE:
        vectors[w] = [0.0, 0.0, 4.0] + [round(rng.uniform(-0.2, 0.2), 3) for _ in range(5)]
    for w in GROUP_A_POOL:
        vectors[w] = [0.0, 4.0] + [round(rng.uniform(-0.45, 0.45), 3) for _ in range(6)]
    for w in GROUP_B_POOL:
        vectors[w] = [0.0, 0.0, 4.0] + [round(rng.uniform(-0.45, 0.45), 3) for _ in range(5)]

    with open(os.path.join(out_dir, "embeddings.txt"), "w", encoding="utf-8") as fh:
        fh.write(f"{len(vectors)} 8\n")
        for token, vec in vectors.items():
            fh.write(token + " " + " ".join(repr(float(v)) for v in vec) + "\n")

    # --- relevant documents ---
    counts = day_counts()
    docs = []           # (day, group, words, hashtags)
    doc_counter = 0
    for t in range(DAYS):
        spike_extras = SPIKE_EXTRA if t == SPIKE_DAY else 0
        for k in range(counts[t]):
            is_spike_extra = k >= counts[t] - spike_extras
            group = "A" if (doc_counter % 2 == 0 or is_spike_extra) else "B"
            core = GROUP_A_CORE if group == "A" else GROUP_B_CORE
            pool = GROUP_A_POOL if group == "A" else GROUP_B_POOL
            picks = [core[(doc_counter + j) % len(core)] for j in range(3)]
            pool_word = pool[doc_counter % len(pool)]
            common = COMMON_WORDS[doc_counter % len(COMMON_WORDS)]
            negated = doc_counter % 10 == 9
            if t < SPIKE_DAY:
                phrase = ["nicht", "super"] if negated else ["super"]
            else:
                phrase = ["nicht", "schrecklich"] if negated else ["schrecklich"]
            words = ["die", "impfung", "und", common] + picks + [pool_word] + phrase
            hashtags = []
            if doc_counter % 9 == 5:
                hashtags = ["impfdebatte"]
            if doc_counter % 97 == 13:
                # query only reachable through the hashtag
                words = [w for w in words if w != "impfung"]
                hashtags = ["impfung"]
            docs.append({"day": t, "group": group, "words": words, "hashtags": hashtags})
            doc_counter += 1

    # --- sentiment bookkeeping and the exact REL*COUNT == SUM identity ---
    def doc_sum(words):
        pos, neg = 1, -1
        for i, w in enumerate(words):
            strength = {"super": 3, "schrecklich": -4}.get(w)
            if strength is None:
                continue
            if i > 0 and words[i - 1] == "nicht":
                strength = -strength
            if strength > 0:
                pos = max(pos, strength)
            else:
                neg = min(neg, strength)
        return (pos - 1) + (neg + 1)

    for t in range(DAYS):
        day_docs = [d for d in docs if d["day"] == t]
        while True:
            s = sum(doc_sum(d["words"]) for d in day_docs)
            c = len(day_docs)
            if c == 0 or (s / c) * c == s:
                break
            flipped = False
            for d in day_docs:
                if "nicht" in d["words"]:
                    d["words"].remove("nicht")
                    flipped = True
                    break
            if not flipped:
                raise RuntimeError(f"cannot fix REL identity on day {t}")

    sizes = {"A": 0, "B": 0}
    for d in docs:
        sizes[d["group"]] += 1
    assert sizes["A"] > sizes["B"], sizes
    print(f"e2e group sizes: A={sizes['A']} B={sizes['B']} total={len(docs)}")

    # --- verify the planted analytics signals ---
    values = [float(c) for c in counts]
    mean = sum(values) / len(values)
    var = sum((v - mean) ** 2 for v in values) / len(values)
    penalty = 2.0 * var * math.log(len(values))
    bounds = reference_pelt(values, penalty)
    assert STEP_DAY in bounds, (bounds, penalty)
    peak_idx = reference_peaks(values)
    assert peak_idx == [SPIKE_DAY], peak_idx
    print(f"e2e planted signals verified: peaks={peak_idx} change_bounds={bounds}")

    # --- serialize corpus: relevant docs plus chaff, shuffled by timestamp ---
    def day_to_date(t):
        base = 737790  # ordinal of 2021-01-01
        import datetime
        return datetime.date.fromordinal(datetime.date(2021, 1, 1).toordinal() + t)

    lines = []
    next_id = 0

    def fresh_id():
        nonlocal next_id
        next_id += 1
        return f"t{next_id:05d}"

    def record(day, words, hashtags, lang="de", hour=None, rec_id=None):
        date = day_to_date(day)
        hour = (next_id * 7) % 23 if hour is None else hour
        return {
            "id": rec_id or fresh_id(),
            "created_at": f"{date.isoformat()}T{hour:02d}:{(next_id * 13) % 60:02d}:00Z",
            "lang": lang,
            "text": " ".join(words),
            "hashtags": hashtags,
        }

    kept_ids = []
    for d in docs:
        rec = record(d["day"], d["words"], d["hashtags"])
        kept_ids.append(rec["id"])
        lines.append((d["day"], json.dumps(rec, ensure_ascii=False)))

    # excluded: match only the exclusion term
    for i in range(5):
        rec = record(20 + i * 25, ["die", "infektion", "breitet", "sich", "aus"], [])
        lines.append((20 + i * 25, json.dumps(rec, ensure_ascii=False)))
    # wrong language
    for i in range(10):
        rec = record(10 + i * 12, ["the", "impfung", "debate", "continues"], [], lang="en")
        lines.append((10 + i * 12, json.dumps(rec, ensure_ascii=False)))
    # outside the window
    for i in range(10):
        date = "2020-12-15" if i % 2 == 0 else "2021-06-15"
        rec = {
            "id": fresh_id(),
            "created_at": f"{date}T09:00:00Z",
            "lang": "de",
            "text": "die impfung und impfstoff nebenwirkung fieber symptome super",
            "hashtags": [],
        }
        lines.append((0 if i % 2 == 0 else DAYS - 1, json.dumps(rec, ensure_ascii=False)))
    # no seed term at all
    for i in range(10):
        rec = record(30 + i * 10, ["heute", "schönes", "wetter", "und", "sonne", "am", "see"], [])
        lines.append((30 + i * 10, json.dumps(rec, ensure_ascii=False)))
    # duplicate ids of earlier kept records
    for i in range(2):
        dup = record(60 + i, ["die", "impfung", "und", "impfstoff", "nebenwirkung",
                              "fieber", "symptome", "schrecklich"], [], rec_id=kept_ids[i])
        lines.append((60 + i, json.dumps(dup, ensure_ascii=False)))
    # malformed lines
    malformed = [
        "{not json at all",
        json.dumps({"id": "m1", "created_at": "2021-02-30T12:00:00Z", "lang": "de",
                    "text": "bad date impfung", "hashtags": []}),
        json.dumps({"id": "m2", "lang": "de", "text": "missing timestamp", "hashtags": []}),
        json.dumps({"id": "m3", "created_at": "2021-02-10T12:00:00Z", "lang": "de",
                    "text": "bad hashtag impfung", "hashtags": ["zwei worte"]}),
        json.dumps({"id": "", "created_at": "2021-02-11T12:00:00Z", "lang": "de",
                    "text": "empty id impfung", "hashtags": []}),
    ]
    for i, line in enumerate(malformed):
        lines.append((40 + i * 20, line))

    assert len(lines) == 1000, len(lines)
    lines.sort(key=lambda pair: pair[0])
    with open(os.path.join(out_dir, "corpus.jsonl"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(line for _, line in lines) + "\n")

    with open(os.path.join(out_dir, "themes.json"), "w", encoding="utf-8") as fh:
        json.dump({
            "themes": {
                "safety and side effects": [0],
                "freedom and civic liberties": [1],
            },
            "labels": {
                "0": "Vaccination side effects",
                "1": "Mandates and basic rights",
            },
        }, fh, indent=2, ensure_ascii=False)
        fh.write("\n")

    with open(os.path.join(out_dir, "config.json"), "w", encoding="utf-8") as fh:
        json.dump({
            "corpus": "corpus.jsonl",
            "window": {"begin": "2021-01-01T00:00:00Z", "end": "2021-05-31T23:59:59Z"},
            "lang": "de",
            "query": "Impfung",
            "expansion": {"min_similarity": 0.6, "top_k": 30},
            "exclusion_terms": ["infektion"],
            "lexicon": "../../lexicon_de.tsv",
            "lemma_table": "../../lemma_de.tsv",
            "word_embeddings": "embeddings.txt",
            "doc_embed_strategy": "mean-word-vector",
            "topics": {
                "n_topics_target": 2,
                "min_cluster_size": 10,
                "reduced_dim": 5,
                "ngram_max": 2,
                "diversity": 1.0,
            },
            "theme_map": "themes.json",
            "phases_rki": "../../phases_rki.csv",
            "phases_policy": "../../phases_policy.csv",
            "events": "../../events.csv",
            "peak_multiplier": 1.5,
            "alpha": 0.05,
            "alignment_window_days": 3,
            "out_dir": "out",
            "random_seed": 7,
        }, fh, indent=2)
        fh.write("\n")


if __name__ == "__main__":
    make_seedex()
    make_e2e()
    print("fixtures written to", os.path.normpath(FIXTURES))
