"""Brute-force recount of tiny_so/annotations.json straight from the raw file."""
import json
import os
import sys

path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures", "tiny_so", "annotations.json")
ann = json.load(open(path))
samples = regions = captions = 0
frames = set()
per_count = {}
words = {}
for v in ann["videos"]:
    vc = 0
    for s in v["subjects"]:
        samples += 1
        regions += len(s["regions"])
        captions += len(s["captions"])
        vc += len(s["captions"])
        words[s["subject_word"]] = words.get(s["subject_word"], 0) + 1
        for r in s["regions"]:
            frames.add((v["video_id"], r["frame_index"]))
    k = len(v["subjects"])
    c, n = per_count.get(k, (0, 0))
    per_count[k] = (c + vc, n + k)
print("samples", samples, "regions", regions, "frames", len(frames), "captions", captions)
print("per_count", {k: c / n for k, (c, n) in per_count.items()})
print("words", words)
