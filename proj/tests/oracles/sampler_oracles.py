"""Independent oracles for the sampler goldens (toy extractor, softmax, k-means)."""
import itertools
import math


def toy_features(img, h, w):
    # img[y][x] = (r, g, b); 4x4 grid means / 255, then 8-bin histograms, then L2 norm.
    v = []
    for gy in range(4):
        y0 = min(gy * h // 4, h - 1); y1 = min(max(y0 + 1, (gy + 1) * h // 4), h)
        for gx in range(4):
            x0 = min(gx * w // 4, w - 1); x1 = min(max(x0 + 1, (gx + 1) * w // 4), w)
            for c in range(3):
                vals = [img[y][x][c] for y in range(y0, y1) for x in range(x0, x1)]
                v.append(sum(vals) / (255.0 * len(vals)))
    for c in range(3):
        bins = [0.0] * 8
        for y in range(h):
            for x in range(w):
                bins[img[y][x][c] >> 5] += 1.0 / (h * w)
        v.extend(bins)
    n = math.sqrt(sum(a * a for a in v))
    return [a / n for a in v]


def softmax(xs):
    m = max(xs)
    e = [math.exp(x - m) for x in xs]
    z = sum(e)
    return [a / z for a in e]


def cos(a, b):
    return sum(x * y for x, y in zip(a, b)) / (math.sqrt(sum(x * x for x in a)) * math.sqrt(sum(y * y for y in b)))


print("== toy extractor: 8x8, left half black, right half white")
img = [[(0, 0, 0) if x < 4 else (255, 255, 255) for x in range(8)] for y in range(8)]
f = toy_features(img, 8, 8)
nz = {i: round(a, 15) for i, a in enumerate(f) if a != 0}
print(nz)

print("== toy extractor: 6x5 gradient (odd sizes)")
img = [[((y * 40 + x * 7) % 256, (x * 50) % 256, (y * x * 13) % 256) for x in range(5)] for y in range(6)]
f = toy_features(img, 6, 5)
print([round(a, 15) for a in f])

print("== softmax (0.9, 0.1, -0.2)")
print(["%.12f" % p for p in softmax([0.9, 0.1, -0.2])])

print("== kmeans brute force over 2-partitions of the two-blob instance")
pts = [(0, 0), (0, 1), (10, 10), (10, 11)]


def inertia(points, labels, k):
    tot = 0.0
    for j in range(k):
        mem = [p for p, l in zip(points, labels) if l == j]
        if not mem:
            return math.inf
        cx = sum(p[0] for p in mem) / len(mem); cy = sum(p[1] for p in mem) / len(mem)
        tot += sum((p[0] - cx) ** 2 + (p[1] - cy) ** 2 for p in mem)
    return tot


best = min((inertia(pts, lab, 2), lab) for lab in itertools.product(range(2), repeat=4))
print(best)

print("== Monte-Carlo instance: 6 frames, 2 clusters")
feats = [(5, 0, 0), (5, 1, 0), (5, 0, 3), (0, 5, 0), (1, 5, 0), (2, 5, 0)]
subject = (1.0, 0.0, 0.0)
s = [cos(f, subject) for f in feats]
print("sims", ["%.12f" % x for x in s])
print("clusterA", ["%.12f" % p for p in softmax(s[:3])])
print("clusterB", ["%.12f" % p for p in softmax(s[3:])])
