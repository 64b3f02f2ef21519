"""Character-trigram cosine computed by hand-rolled counting, for rank_candidates goldens."""
import math
from collections import Counter


def grams(w):
    p = "#" + w + "#"
    return Counter(p[i:i + 3] for i in range(len(p) - 2))


def cos(a, b):
    ga, gb = grams(a), grams(b)
    dot = sum(c * gb[g] for g, c in ga.items())
    return dot / (math.sqrt(sum(c * c for c in ga.values())) * math.sqrt(sum(c * c for c in gb.values())))


for label in ["dog", "person", "pup", "puppies", "puppy"]:
    print("puppy", label, "%.12f" % cos("puppy", label))
print("man", "woman", "%.12f" % cos("man", "woman"))
