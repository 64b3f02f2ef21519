"""Independent reference values for the model unit tests.

Weights follow the same closed-form fill as the C++ test:
    w[i, j] = 0.1 * sin(phase + 0.37 * i + 0.91 * j)
with layer-norm gains 1 + fill. Resizing uses torch.nn.functional.interpolate
(bilinear, align_corners=False); the encoder is a straight-line numpy
pre-norm transformer.
"""
import math

import numpy as np
import torch
import torch.nn.functional as F


def fill(rows, cols, phase):
    i = np.arange(rows)[:, None]
    j = np.arange(cols)[None, :]
    return 0.1 * np.sin(phase + 0.37 * i + 0.91 * j)


def gradient_crop(h, w):
    y = np.arange(h)[:, None, None]
    x = np.arange(w)[None, :, None]
    c = np.arange(3)[None, None, :]
    return ((y * 13 + x * 5 + c * 29) % 97) / 96.0


def resize(img, oh, ow):
    t = torch.tensor(img, dtype=torch.float64).permute(2, 0, 1)[None]
    r = F.interpolate(t, size=(oh, ow), mode="bilinear", align_corners=False)
    return r[0].permute(1, 2, 0).numpy()


def patches(img, p):
    h, w, _ = img.shape
    rows = []
    for py in range(h // p):
        for px in range(w // p):
            rows.append(img[py * p:(py + 1) * p, px * p:(px + 1) * p, :].reshape(-1))
    return np.array(rows)


def layer_norm(x, g, b, eps=1e-5):
    mu = x.mean(axis=1, keepdims=True)
    var = ((x - mu) ** 2).mean(axis=1, keepdims=True)
    return (x - mu) / np.sqrt(var + eps) * g + b


def gelu(x):
    return 0.5 * x * (1 + np.tanh(math.sqrt(2 / math.pi) * (x + 0.044715 * x ** 3)))


def softmax(s):
    s = s - s.max(axis=1, keepdims=True)
    e = np.exp(s)
    return e / e.sum(axis=1, keepdims=True)


def encoder_golden():
    d, heads = 8, 2
    dh = d // heads
    L = 5
    x = np.cos(0.5 * np.arange(L)[:, None] + 0.3 * np.arange(d)[None, :])
    phase = iter(range(100))
    P = {}
    # Order mirrors the C++ test's fill order.
    for name, shape in [("ln1.g", (1, d)), ("ln1.b", (1, d)),
                        ("wq", (d, d)), ("wk", (d, d)), ("wv", (d, d)), ("wo", (d, d)),
                        ("bq", (1, d)), ("bk", (1, d)), ("bv", (1, d)), ("bo", (1, d)),
                        ("ln2.g", (1, d)), ("ln2.b", (1, d)),
                        ("w1", (d, 4 * d)), ("b1", (1, 4 * d)), ("w2", (4 * d, d)), ("b2", (1, d)),
                        ("lnf.g", (1, d)), ("lnf.b", (1, d))]:
        w = fill(*shape, next(phase))
        if name.endswith(".g"):
            w = 1 + w
        P[name] = w
    h = layer_norm(x, P["ln1.g"], P["ln1.b"])
    q, k, v = h @ P["wq"] + P["bq"], h @ P["wk"] + P["bk"], h @ P["wv"] + P["bv"]
    outs = []
    for i in range(heads):
        sl = slice(i * dh, (i + 1) * dh)
        a = softmax(q[:, sl] @ k[:, sl].T / math.sqrt(dh))
        outs.append(a @ v[:, sl])
    x = x + np.concatenate(outs, axis=1) @ P["wo"] + P["bo"]
    h = layer_norm(x, P["ln2.g"], P["ln2.b"])
    x = x + gelu(h @ P["w1"] + P["b1"]) @ P["w2"] + P["b2"]
    return layer_norm(x, P["lnf.g"], P["lnf.b"])


def fmt(m):
    return "{" + ", ".join("%.12f" % v for v in np.asarray(m).reshape(-1)) + "}"


def main():
    crop = gradient_crop(5, 7)

    print("// resize 5x7 -> 4x4, row-major (y, x, c)")
    print(fmt(resize(crop, 4, 4)))
    print("// resize 5x7 -> 9x11, first row")
    print(fmt(resize(crop, 9, 11)[0]))

    # Hard prompt: g = 2, P = 2, d = 6; patch.w phase 3, patch.b phase 4.
    r = resize(crop, 4, 4)
    tokens = patches(r, 2) @ fill(12, 6, 3.0) + fill(1, 6, 4.0)
    print("// hard prompt tokens (4 x 6)")
    print(fmt(tokens))

    # Subject token: R = 16, 4x4 grid pooling, d = 6; subj.w phase 5, subj.b phase 6.
    r = resize(crop, 16, 16)
    pooled = [r[gy * 4:(gy + 1) * 4, gx * 4:(gx + 1) * 4, c].mean()
              for gy in range(4) for gx in range(4) for c in range(3)]
    tok = np.array(pooled)[None, :] @ fill(48, 6, 5.0) + fill(1, 6, 6.0)
    print("// subject token (1 x 6)")
    print(fmt(tok))

    print("// encoder output (5 x 8)")
    print(fmt(encoder_golden()))


if __name__ == "__main__":
    main()
