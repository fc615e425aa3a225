#!/usr/bin/env python3
"""Regenerates the bundled fixtures.

data/fixtures/table1_*      per-platform marginals of the descriptive table, scaled 1/1000
tests/data/mentions_100.jsonl   100 mention lines, 7 of them malformed

Output is deterministic; rerun after changing the generator and commit the files.
"""
import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

# platform -> (mentions, distinct mentioned papers)
TABLE1 = [
    ("tweet", 1346, 157),
    ("news_story", 80, 17),
    ("facebook_post", 73, 28),
    ("blog_post", 30, 18),
    ("patent", 24, 10),
    ("googleplus_post", 15, 7),
    ("wikipedia_page", 10, 8),
    ("policy_document", 4, 3),
    ("f1000_post", 4, 4),
    ("reddit_post", 4, 3),
    ("peer_review", 2, 1),
    ("weibo_post", 1, 1),
    ("video", 1, 1),
    ("qa_post", 0, 0),
    ("pin", 0, 0),
    ("linkedin_post", 0, 0),
]
MENTIONED = 175
WITH_DOI = 194   # 194 / 220 = 88.2 %
TOTAL_PUBS = 220

SUBJECTS = [
    "antibiotic resistance", "gut microbiome", "zika virus", "influenza vaccine",
    "biofilm formation", "crispr cas9", "bacterial infection", "yeast metabolism",
    "viral replication", "soil bacteria", "probiotic supplementation", "malaria parasite",
    "tuberculosis treatment", "ebola outbreak", "microbial diversity", "phage therapy",
]
CONTEXTS = [
    "in hospital patients", "during pregnancy", "in dairy cattle", "under climate change",
    "in urban wastewater", "among children", "in beer brewing", "in marine sediments",
]
FRAMES = [
    "{s} {c}", "global survey of {s} {c}", "{s} and {t} {c}", "genomic analysis of {s}",
    "{s}: a systematic review", "rapid detection of {s} {c}",
]

NEWS = ["EurekAlert!", "Medical Xpress", "Scientific American", "The Economist", "KSLA News"]
POLICY = ["World Health Organization", "UK Government", "CDC", "FAO"]


def title(rng):
    s, t = rng.sample(SUBJECTS, 2)
    return rng.choice(FRAMES).format(s=s, t=t, c=rng.choice(CONTEXTS))


def spread(rng, total, papers):
    """Each paper gets >= 1 mention; the rest land on a heavy-tailed pick."""
    counts = [1] * len(papers)
    weights = [1.0 / (i + 1) for i in range(len(papers))]
    for _ in range(total - len(papers)):
        counts[rng.choices(range(len(papers)), weights)[0]] += 1
    return counts


def twitter_actor(rng):
    k = min(int(rng.paretovariate(1.2)), 40)
    if k >= 20:
        name = f"micro_papers_{k}"
        meta = {"following_count": rng.randint(0, 12), "lifetime_post_count": 20000 + 100 * k,
                "follower_count": 300 + k}
    else:
        name = f"user_{k:02d}_{rng.randint(0, 9)}"
        meta = {"following_count": rng.randint(50, 2000), "lifetime_post_count": rng.randint(100, 9000),
                "follower_count": rng.randint(10, 5000)}
    return "@" + name, name, meta


def table1(out_dir):
    rng = random.Random(20181022)
    pubs = []
    for i in range(TOTAL_PUBS):
        doi = f"10.5555/micro.{2012 + i % 7}.{i:04d}" if i < WITH_DOI else ""
        pubs.append((doi, title(rng), 2012 + i % 7, "Fixture Journal", "Microbiology"))

    # Paper sets per platform; tweets cover the first 157, the rest spread so
    # that the union is exactly the first 175 DOI-bearing papers.
    sets = {}
    for platform, mentions, papers in TABLE1:
        if papers == 0:
            continue
        if platform == "tweet":
            chosen = list(range(157))
        elif platform == "news_story":
            chosen = list(range(157, 174))
        elif platform == "facebook_post":
            chosen = [174] + rng.sample(range(174), papers - 1)
        else:
            chosen = rng.sample(range(MENTIONED), papers)
        sets[platform] = (mentions, sorted(chosen))
    covered = set().union(*(set(p) for _, p in sets.values()))
    assert covered == set(range(MENTIONED)), len(covered)

    lines = []
    serial = 0
    for platform, (mentions, papers) in sets.items():
        for paper, count in zip(papers, spread(rng, mentions, papers)):
            for _ in range(count):
                serial += 1
                month = rng.randint(0, 33)
                ts = f"{2016 + month // 12}-{month % 12 + 1:02d}-{rng.randint(1, 28):02d}T{rng.randint(0, 23):02d}:00:00Z"
                if platform == "tweet":
                    actor_id, name, meta = twitter_actor(rng)
                elif platform == "news_story":
                    name = rng.choice(NEWS)
                    actor_id, meta = name.lower().replace(" ", "-"), None
                elif platform == "policy_document":
                    name = rng.choice(POLICY)
                    actor_id, meta = name.lower().replace(" ", "-"), None
                else:
                    actor_id, name, meta = f"{platform}-{rng.randint(0, 19)}", f"{platform} source", None
                rec = {"mention_id": f"m{serial:05d}", "platform": platform, "actor_id": actor_id,
                       "actor_name": name, "actor_meta": meta,
                       "doi": "https://doi.org/" + pubs[paper][0].upper(), "timestamp": ts}
                lines.append(json.dumps(rec, sort_keys=True))
    rng.shuffle(lines)

    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "table1_publications.tsv", "w") as f:
        f.write("doi\ttitle\tyear\tsource\tcategories\n")
        for doi, t, year, source, cats in pubs:
            f.write(f"{doi}\t{t}\t{year}\t{source}\t{cats}\n")
    with open(out_dir / "table1_mentions.jsonl", "w") as f:
        f.write("\n".join(lines) + "\n")


def mentions_100(path):
    rng = random.Random(7)
    lines = []
    for i in range(93):
        rec = {"mention_id": f"ok{i:03d}", "platform": rng.choice(["tweet", "news_story", "policy_document", "blog_post"]),
               "actor_id": f"actor{i % 17}", "actor_name": f"Actor {i % 17}",
               "actor_meta": {"follower_count": i}, "doi": f"10.1000/fixture.{i % 31}",
               "timestamp": f"2017-{i % 12 + 1:02d}-15T08:30:00Z"}
        lines.append(json.dumps(rec, sort_keys=True))
    bad = [
        '{"mention_id": "bad1", "platform": "myspace_post", "actor_id": "a", "actor_name": "A", "doi": "10.1/x", "timestamp": "2017-01-01T00:00:00Z"}',
        '{"mention_id": "bad2", "platform": "tweet", "actor_id": "", "actor_name": "A", "doi": "10.1/x", "timestamp": "2017-01-01T00:00:00Z"}',
        '{"mention_id": "bad3", "platform": "tweet", "actor_id": "a", "actor_name": "A", "doi": "10.1/x", "timestamp": "yesterday"}',
        '{"mention_id": "bad4", "platform": "tweet", "actor_id": "a", "actor_name": "A", "doi": "10.1/x"',
        'this is not json at all',
        '{"platform": "tweet", "actor_id": "a", "actor_name": "A", "doi": "10.1/x", "timestamp": "2017-01-01T00:00:00Z"}',
        '["an", "array", "not", "an", "object"]',
    ]
    for j, line in enumerate(bad):
        lines.insert(5 + 13 * j, line)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    table1(ROOT / "data" / "fixtures")
    mentions_100(ROOT / "tests" / "data" / "mentions_100.jsonl")
