#!/usr/bin/env python3
"""Regenerates everything under fixtures/.

Deterministic by construction: fixed seeds, no wall-clock input. Run from the
repository root:

    python3 scripts/make_fixtures.py

The corpus manifests are synthetic stand-ins for the harvested documentation
set (the original page texts are not redistributable). They preserve the
exact per-platform link and word counts the statistics tables depend on, so
`stats` output and the corpus acceptance checks are unaffected by the
substitution.
"""

import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
CORPUS_DIR = ROOT / "fixtures" / "corpus"
LABELS_DIR = ROOT / "fixtures" / "labels"
GOLDEN_DIR = ROOT / "fixtures" / "golden"

# (name, type, link_count, total_words); totals chosen so that
# total/links reproduces the reference words-per-document column exactly.
PLATFORMS = [
    ("Amazon", "intermediation", 5, 2172),        # 434.40
    ("Bing", "search_engine", 16, 15425),         # 964.06
    ("Booking", "intermediation", 7, 4056),       # 579.42
    ("Google", "search_engine", 52, 87334),       # 1679.50
    ("Tripadvisor", "intermediation", 10, 16539), # 1653.90
    ("Yahoo", "search_engine", 3, 522),           # 174.00
]

PHRASES = [
    "ranking reflects the relevance of each listing to the query",
    "the order of results depends on quality and engagement signals",
    "main parameters include price competitiveness and availability",
    "sellers can improve visibility by completing their profile",
    "sponsored placements are labelled and do not alter organic order",
    "click-through rates feed back into the relevance model",
    "the algorithm weighs recency of reviews against their volume",
    "commission levels never influence the default sort order",
    "page speed and mobile friendliness are considered for websites",
    "content freshness is re-evaluated on a rolling basis",
    "localisation adjusts results to the language of the visitor",
    "conversion history is aggregated over the trailing quarter",
    "structured data helps the crawler understand page intent",
    "partners may purchase promoted slots shown above the results",
    "customer service ratings contribute a smaller secondary weight",
    "duplicate listings are collapsed before scores are assigned",
    "the relevance model is retrained at regular intervals",
    "cancellations and disputes lower a listing standing gradually",
    "keyword matching is semantic rather than purely lexical",
    "photos meeting quality guidelines raise presentation scores",
]

FILLERS = ["overall", "in", "practice", "across", "markets", "for",
           "business", "users", "and", "partners"]


def make_paragraph(rng, n_words):
    words = []
    while len(words) < n_words:
        words.extend(rng.choice(PHRASES).split())
    words = words[:n_words]
    while len(words) < n_words:
        words.append(rng.choice(FILLERS))
    # Punctuate: sentence breaks every 10-18 words, period glued to the token
    # so whitespace tokenisation is unchanged.
    out = []
    sent_len = 0
    limit = rng.randint(10, 18)
    for i, w in enumerate(words):
        if sent_len == 0:
            w = w[0].upper() + w[1:]
        sent_len += 1
        last = i == len(words) - 1
        if last or sent_len >= limit:
            w = w.rstrip(".,") + "."
            sent_len = 0
            limit = rng.randint(10, 18)
        out.append(w)
    text = " ".join(out)
    assert len(text.split()) == n_words
    return text


def make_document(rng, n_words):
    """Canonical form: paragraphs joined by one blank line, every paragraph
    at least 3 words, no trailing whitespace on any line."""
    targets = []
    remaining = n_words
    while remaining > 0:
        t = rng.randint(20, 90)
        if remaining - t < 3:
            t = remaining
        targets.append(t)
        remaining -= t
    paras = [make_paragraph(rng, t) for t in targets]
    content = "\n\n".join(paras)
    assert len(content.split()) == n_words
    return content


def split_words(total, n_docs):
    base, extra = divmod(total, n_docs)
    return [base + (1 if i < extra else 0) for i in range(n_docs)]


def write_corpora():
    CORPUS_DIR.mkdir(parents=True, exist_ok=True)
    for name, ptype, links, total in PLATFORMS:
        rng = random.Random(f"corpus:{name}")
        slug = name.lower()
        docs = []
        for i, w in enumerate(split_words(total, links)):
            docs.append({
                "url": f"https://docs.{slug}.example/ranking/{i + 1}",
                "title": f"{name} ranking documentation, part {i + 1}",
                "fetched_at": f"2025-11-{10 + i % 19:02d}T{8 + (i * 3) % 12:02d}:{(i * 17) % 60:02d}:00Z",
                "content": make_document(rng, w),
            })
        manifest = {"platform_name": name, "platform_type": ptype,
                    "documents": docs}
        grand = sum(len(d["content"].split()) for d in docs)
        assert grand == total, (name, grand, total)
        path = CORPUS_DIR / f"{slug}.json"
        path.write_text(json.dumps(manifest, indent=2, ensure_ascii=False) + "\n",
                        encoding="utf-8")
        print(f"corpus {name}: {links} docs, {grand} words -> {path.name}")


# Bank order per platform type (the Q4 variant differs; Q18/Q19 are
# search-engine only).
INT_ORDER = ["Q1", "Q2", "Q3", "Q4", "Q5", "Q6", "Q7", "Q8", "Q9", "Q10",
             "Q11", "Q12", "Q13", "Q14", "Q15", "Q16", "Q17"]
SE_ORDER = ["Q1", "Q2", "Q3", "Q4-SE", "Q5", "Q6", "Q7", "Q8", "Q9", "Q10",
            "Q11", "Q12", "Q13", "Q14", "Q15", "Q16", "Q17", "Q18", "Q19"]

# Majority-Yes question counts per platform, chosen so the Always-Yes
# baseline column of the agreement matrix comes out at the reference rates.
YES_COUNTS = {"Amazon": 11, "Bing": 14, "Booking": 1, "Google": 6,
              "Tripadvisor": 10, "Yahoo": 1}

YES_TRIPLES = [(4, 3, 2), (5, 4, 3), (3, 3, 1), (4, 4, 2), (5, 3, 2),
               (3, 4, 2), (4, 5, 1), (3, 3, 3)]
NO_TRIPLES = [(2, 2, 4), (1, 2, 3), (2, 1, 1), (1, 1, 4), (2, 2, 2),
              (1, 2, 5), (2, 1, 3), (1, 1, 1)]


def binary(score):
    return score >= 3


def write_expert_labels():
    LABELS_DIR.mkdir(parents=True, exist_ok=True)
    rng = random.Random("experts")
    rows = ["expert_id,platform,question_id,score"]
    for name, ptype, _, _ in PLATFORMS:
        order = INT_ORDER if ptype == "intermediation" else SE_ORDER
        yes_set = set(rng.sample(order, YES_COUNTS[name]))
        for qid in order:
            pool = YES_TRIPLES if qid in yes_set else NO_TRIPLES
            triple = rng.choice(pool)
            want = qid in yes_set
            got = sum(binary(s) for s in triple) >= 2
            assert got == want
            for e, score in enumerate(triple, start=1):
                rows.append(f"expert_{e},{name},{qid},{score}")
    path = LABELS_DIR / "expert_labels.csv"
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    print(f"expert labels: {len(rows) - 1} rows -> {path.name}")


# Survey targets: (platform, question) -> (mean, std) on the reference
# agreement table, n=100 respondents per cell.
SURVEY_TARGETS = {
    ("Booking", "Q3"): (3.56, 0.95),
    ("Booking", "Q4"): (3.43, 1.04),
    ("Booking", "Q15"): (3.79, 0.89),
    ("Booking", "Q16"): (2.87, 1.17),
    ("Tripadvisor", "Q3"): (3.81, 0.86),
    ("Tripadvisor", "Q4"): (3.66, 0.96),
    ("Tripadvisor", "Q15"): (3.44, 0.91),
    ("Tripadvisor", "Q16"): (2.91, 1.24),
}
N_PART = 100


def find_counts(mean, std):
    """Smallest-lexicographic counts (n1..n5) with sum 100, exact mean, and
    sample std (n-1 denominator) within +/-0.005 of the target."""
    s = round(mean * N_PART)
    lo, hi = std - 0.005, std + 0.005
    # sample variance = (ssq - s^2/n) / (n-1)
    ssq_lo = lo * lo * (N_PART - 1) + s * s / N_PART
    ssq_hi = hi * hi * (N_PART - 1) + s * s / N_PART
    for n1 in range(N_PART + 1):
        for n2 in range(N_PART + 1 - n1):
            for n3 in range(N_PART + 1 - n1 - n2):
                # remaining counts and weighted sum determine n4, n5
                rest = N_PART - n1 - n2 - n3
                wsum = s - (n1 + 2 * n2 + 3 * n3)
                # n4*4 + n5*5 = wsum, n4 + n5 = rest
                n5 = wsum - 4 * rest
                n4 = rest - n5
                if n4 < 0 or n5 < 0:
                    continue
                ssq = n1 + 4 * n2 + 9 * n3 + 16 * n4 + 25 * n5
                if ssq_lo <= ssq <= ssq_hi:
                    var = (ssq - s * s / N_PART) / (N_PART - 1)
                    return (n1, n2, n3, n4, n5), var ** 0.5
    raise RuntimeError(f"no integer counts for mean={mean} std={std}")


def minutes_for(pidx, platform):
    off = 0 if platform == "Booking" else 3
    return ((7 * pidx + off) % 41) / 4.0


def write_participant_ratings():
    rows = ["participant_id,platform,question_id,agreement,read_minutes"]
    for platform in ["Booking", "Tripadvisor"]:
        per_question = {}
        for qid in ["Q3", "Q4", "Q15", "Q16"]:
            mean, std = SURVEY_TARGETS[(platform, qid)]
            counts, got_std = find_counts(mean, std)
            values = [v for v, c in zip(range(1, 6), counts) for _ in range(c)]
            rng = random.Random(f"survey:{platform}:{qid}")
            rng.shuffle(values)
            per_question[qid] = values
            print(f"survey {platform} {qid}: counts={counts} "
                  f"mean={sum(values) / N_PART:.4f} std={got_std:.4f}")
        for p in range(N_PART):
            mins = minutes_for(p, platform)
            for qid in ["Q3", "Q4", "Q15", "Q16"]:
                rows.append(f"p{p + 1:03d},{platform},{qid},"
                            f"{per_question[qid][p]},{mins}")
    path = LABELS_DIR / "participant_ratings.csv"
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    print(f"participant ratings: {len(rows) - 1} rows -> {path.name}")


DIRECT_TEMPLATE = """Your task is to assess the compliance of this documentation based on the following question. Conduct a compliance assessment, focusing on both the technical and legal requirements.
Your assessment should start with a numerical score from 1 to 5, where 1 indicates the question is not answered at all and 5 indicates it's perfectly answered. Following the score, provide a brief explanation highlighting the strengths or weaknesses in addressing the question. Consider the completeness, clarity, and legal implications in your explanation.
For example, your assessment might look like: 'Score: 3. Explanation: The question was only partially answered. While the technical aspects are covered, it lacks legal disclosures.'
Question:
{question}
Documentation:
{chunk}"""

SYNTHESIS_TEMPLATE = """Output a comprehensive answer based only and exclusively on the information within the paragraphs below (if any can be used to answer) which were extracted from the documentation to be assessed. If no paragraph can answer the question, then output only "No, I cannot answer". Otherwise, the comprehensive answer must contain citations to the source paragraphs, e.g., blablabla (paragraphs 1 and 2), blabla (paragraph 0). It should also start with "Yes" if the answer is positive, "No" if the answer is negative, or "N/A" if the answer is not available.
Question: {question}
Paragraphs: {contents}"""


def write_goldens():
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    q1_closed = "Does the documentation explain how 'ranking' is defined/define 'ranking'?"
    q1_open = "How is 'ranking' defined?"
    chunk = "The ranking of offers is determined by relevance and quality signals."
    direct = DIRECT_TEMPLATE.replace("{question}", q1_closed).replace("{chunk}", chunk)
    (GOLDEN_DIR / "direct_prompt.txt").write_text(direct, encoding="utf-8")

    contents = ("paragraph 0: Ranking means the relative prominence given to offers.\n"
                "paragraph 1: Offers are ordered by relevance to the query.")
    synth = SYNTHESIS_TEMPLATE.replace("{question}", q1_open).replace("{contents}", contents)
    (GOLDEN_DIR / "synthesis_prompt.txt").write_text(synth, encoding="utf-8")
    print("golden prompts written (no trailing newline)")


if __name__ == "__main__":
    write_corpora()
    write_expert_labels()
    write_participant_ratings()
    write_goldens()
    print("done")
