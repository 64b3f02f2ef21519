"""Brute-force metric oracles; writes tests/fixtures/metric_goldens.json.

BLEU@4   : corpus-level, clipped counts, closest reference length (shorter on
           ties), no smoothing, 0 when any order has zero matches or zero total.
ROUGE-L  : LCS by exhaustive subsequence enumeration, F with beta=1.2, max over refs.
CIDEr-D  : pycocoevalcap's CiderScorer (sigma=6, x10), an independent implementation.
METEOR-lite: exhaustive enumeration of partial one-to-one alignments; edges are
           exact or Porter-stem equal; best = max exact, then max total, then
           fewest chunks. alpha=0.9, beta=3, gamma=0.5. Best reference per pair.
"""
import itertools
import json
import math
import os
from collections import Counter

from nltk.stem.porter import PorterStemmer
from pycocoevalcap.cider.cider_scorer import CiderScorer

HERE = os.path.dirname(os.path.abspath(__file__))
FIX = os.path.join(HERE, "..", "fixtures")
stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)


def ngrams(toks, n):
    return Counter(tuple(toks[i:i + n]) for i in range(len(toks) - n + 1))


def bleu4(pairs):
    match = [0] * 4
    total = [0] * 4
    c_len = r_len = 0
    for cand, refs in pairs:
        c_len += len(cand)
        r_len += min((abs(len(r) - len(cand)), len(r)) for r in refs)[1]
        for n in range(1, 5):
            cc = ngrams(cand, n)
            for g, c in cc.items():
                match[n - 1] += min(c, max(ngrams(r, n)[g] for r in refs))
            total[n - 1] += max(len(cand) - n + 1, 0)
    if any(t == 0 for t in total) or any(m == 0 for m in match):
        return 0.0
    bp = 1.0 if c_len > r_len else math.exp(1 - r_len / c_len)
    return bp * math.exp(sum(math.log(m / t) for m, t in zip(match, total)) / 4)


def lcs_brute(a, b):
    for k in range(min(len(a), len(b)), 0, -1):
        subs_b = set(itertools.combinations(b, k))
        for s in itertools.combinations(a, k):
            if s in subs_b:
                return k
    return 0


def rouge_pair(cand, refs, beta=1.2):
    best = 0.0
    for r in refs:
        l = lcs_brute(cand, r)
        if l == 0 or not cand:
            continue
        p, rec = l / len(cand), l / len(r)
        best = max(best, (1 + beta ** 2) * p * rec / (rec + beta ** 2 * p))
    return best


def cider(pairs):
    sc = CiderScorer(n=4, sigma=6.0)
    for cand, refs in pairs:
        sc += (" ".join(cand), [" ".join(r) for r in refs])
    score, scores = sc.compute_score()
    return float(score), [float(s) for s in scores]


def alignments(cand, ref):
    """Every partial one-to-one alignment with its (exact, total, chunks)."""
    out = []

    def rec(i, used, pairs):
        if i == len(cand):
            out.append(list(pairs))
            return
        rec(i + 1, used, pairs)
        for j in range(len(ref)):
            if j in used:
                continue
            if cand[i] == ref[j] or stemmer.stem(cand[i]) == stemmer.stem(ref[j]):
                pairs.append((i, j))
                rec(i + 1, used | {j}, pairs)
                pairs.pop()

    rec(0, frozenset(), [])
    return out


def chunks(pairs):
    c = 0
    prev = None
    for i, j in pairs:
        if prev is None or not (i == prev[0] + 1 and j == prev[1] + 1):
            c += 1
        prev = (i, j)
    return c


def meteor_pair(cand, refs, alpha=0.9, beta=3.0, gamma=0.5):
    best = 0.0
    for ref in refs:
        key = None
        for al in alignments(cand, ref):
            exact = sum(1 for i, j in al if cand[i] == ref[j])
            k = (exact, len(al), -chunks(al))
            if key is None or k > key:
                key = k
        m = key[1]
        if m == 0:
            continue
        p, r = m / len(cand), m / len(ref)
        fmean = p * r / (alpha * p + (1 - alpha) * r)
        pen = gamma * (-key[2] / m) ** beta
        best = max(best, fmean * (1 - pen))
    return best


def main():
    corpora = json.load(open(os.path.join(FIX, "metric_corpora.json")))
    goldens = {}
    for name, items in corpora.items():
        pairs = [(it["candidate"].split(), [r.split() for r in it["references"]]) for it in items]
        c_score, c_pairs = cider(pairs)
        rouge = [rouge_pair(c, r) for c, r in pairs]
        meteor = [meteor_pair(c, r) for c, r in pairs]
        goldens[name] = {
            "bleu4": bleu4(pairs),
            "rouge_l": sum(rouge) / len(rouge),
            "cider_d": c_score,
            "meteor": sum(meteor) / len(meteor),
            "per_pair": {it["id"]: {"rouge_l": rg, "cider_d": cd, "meteor": mt}
                         for it, rg, cd, mt in zip(items, rouge, c_pairs, meteor)},
        }
    with open(os.path.join(FIX, "metric_goldens.json"), "w") as out:
        json.dump(goldens, out, indent=2, sort_keys=True)
        out.write("\n")
    print(json.dumps(goldens, indent=1, sort_keys=True))

    # Spot values quoted by the unit tests.
    print("bleu [the cat sat] vs [the cat sat down]:", bleu4([("the cat sat".split(), ["the cat sat down".split()])]))
    print("rouge [a b c d] vs [a c b d]:", rouge_pair("a b c d".split(), ["a c b d".split()]))
    print("meteor identical 6 tokens:", meteor_pair("a b c d e f".split(), ["a b c d e f".split()]))
    print("meteor dogs/dog:", meteor_pair(["dogs"], [["dog"]]))
    print("cider 2-pair disjoint identity:", cider([("a b c d e".split(), ["a b c d e".split()]),
                                                     ("v w x y z".split(), ["v w x y z".split()])]))


if __name__ == "__main__":
    main()
