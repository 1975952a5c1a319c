#!/usr/bin/env python3
# Copyright 2026 The StyleAug Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Trains the reduced-width AdaIN encoder/decoder shipped with the repository.

Outputs:
  data/weights/adain_b<W>.adwt   encoder + decoder in the ADWT format
  data/images/*.png              224x224 test images
  tests/data/golden_input.ppm    seeded random 32x32 image
  tests/data/golden_encode.adwt  float64 reference encoding of that image

Phase 1 trains encoder and decoder jointly for reconstruction. Phase 2 freezes
the encoder and fine-tunes the decoder with the usual AdaIN content/style
objective plus a reconstruction term.
"""

import argparse
import struct
from pathlib import Path

import numpy as np
import skimage.data
import skimage.transform
import torch
import torch.nn as nn
import torch.nn.functional as F

MEAN = (0.485, 0.456, 0.406)
STD = (0.229, 0.224, 0.225)

TRAIN_IMAGES = ["astronaut", "rocket", "hubble_deep_field", "chelsea", "camera",
                "immunohistochemistry", "colorwheel"]
TEST_IMAGES = ["coffee", "astronaut", "chelsea", "rocket"]


def encoder_layers(b):
    return [("conv1_1", 3, b, "none"), ("conv1_2", b, b, "pool"),
            ("conv2_1", b, 2 * b, "none"), ("conv2_2", 2 * b, 2 * b, "pool"),
            ("conv3_1", 2 * b, 4 * b, "none"), ("conv3_2", 4 * b, 4 * b, "none"),
            ("conv3_3", 4 * b, 4 * b, "none"), ("conv3_4", 4 * b, 4 * b, "pool"),
            ("conv4_1", 4 * b, 8 * b, "none")]


def decoder_layers(b):
    return [("conv4_1", 8 * b, 4 * b, "up"), ("conv3_4", 4 * b, 4 * b, "none"),
            ("conv3_3", 4 * b, 4 * b, "none"), ("conv3_2", 4 * b, 4 * b, "none"),
            ("conv3_1", 4 * b, 2 * b, "up"), ("conv2_2", 2 * b, 2 * b, "none"),
            ("conv2_1", 2 * b, b, "up"), ("conv1_2", b, b, "none"),
            ("conv1_1", b, 3, "none")]


class Stack(nn.Module):
    def __init__(self, layers, final_relu):
        super().__init__()
        self.spec = layers
        self.final_relu = final_relu
        self.convs = nn.ModuleDict({n: nn.Conv2d(ci, co, 3) for n, ci, co, _ in layers})

    def forward(self, x, taps=None):
        feats = []
        for i, (name, _, _, after) in enumerate(self.spec):
            x = self.convs[name](F.pad(x, (1, 1, 1, 1), mode="reflect"))
            if i + 1 < len(self.spec) or self.final_relu:
                x = F.relu(x)
            if taps is not None and name in taps:
                feats.append(x)
            if after == "pool":
                x = F.max_pool2d(x, 2)
            elif after == "up":
                x = F.interpolate(x, scale_factor=2, mode="nearest")
        return (x, feats) if taps is not None else x


def normalize(x):
    m = torch.tensor(MEAN, dtype=x.dtype).view(1, 3, 1, 1)
    s = torch.tensor(STD, dtype=x.dtype).view(1, 3, 1, 1)
    return (x - m) / s


def denormalize(x):
    m = torch.tensor(MEAN, dtype=x.dtype).view(1, 3, 1, 1)
    s = torch.tensor(STD, dtype=x.dtype).view(1, 3, 1, 1)
    return x * s + m


def stats(x, eps=1e-5):
    n = x.shape[2] * x.shape[3]
    flat = x.reshape(x.shape[0], x.shape[1], n)
    mean = flat.mean(2)
    std = flat.var(2, unbiased=False).sqrt()
    return mean[..., None, None], std[..., None, None]


def adain(c, s, eps=1e-5):
    mc, sc = stats(c)
    ms, ss = stats(s)
    return ss * (c - mc) / (sc + eps) + ms


def load_rgb(name):
    img = getattr(skimage.data, name)()
    if img.ndim == 2:
        img = np.stack([img] * 3, axis=-1)
    return img[..., :3].astype(np.float32) / 255.0


def to_224(img):
    h, w, _ = img.shape
    scale = 224.0 / min(h, w)
    nh, nw = max(224, round(h * scale)), max(224, round(w * scale))
    r = skimage.transform.resize(img, (nh, nw), anti_aliasing=True).astype(np.float32)
    top, left = (nh - 224) // 2, (nw - 224) // 2
    return r[top:top + 224, left:left + 224]


def random_batch(rng, pool, n, size):
    out = []
    for _ in range(n):
        img = pool[rng.integers(len(pool))]
        h, w, _ = img.shape
        scale = rng.uniform(0.35, 1.0)
        ch = max(size, int(min(h, w) * scale))
        y, x = rng.integers(0, h - ch + 1), rng.integers(0, w - ch + 1)
        crop = skimage.transform.resize(img[y:y + ch, x:x + ch], (size, size),
                                        anti_aliasing=True).astype(np.float32)
        if rng.random() < 0.5:
            crop = crop[:, ::-1]
        out.append(crop.transpose(2, 0, 1))
    return torch.from_numpy(np.ascontiguousarray(np.stack(out)))


def write_adwt(path, entries):
    with open(path, "wb") as f:
        f.write(b"ADWT")
        f.write(struct.pack("<II", 1, len(entries)))
        for name, arr in entries:
            arr = np.ascontiguousarray(arr, dtype="<f4")
            raw = name.encode("utf-8")
            f.write(struct.pack("<H", len(raw)))
            f.write(raw)
            f.write(struct.pack("<B", arr.ndim))
            f.write(struct.pack("<%dI" % arr.ndim, *arr.shape))
            f.write(arr.tobytes())
        f.write(struct.pack("<3f", *MEAN))
        f.write(struct.pack("<3f", *STD))


def write_ppm(path, arr_u8):
    h, w, _ = arr_u8.shape
    with open(path, "wb") as f:
        f.write(b"P6\n%d %d\n255\n" % (w, h))
        f.write(arr_u8.tobytes())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--base-width", type=int, default=8)
    ap.add_argument("--recon-steps", type=int, default=1500)
    ap.add_argument("--style-steps", type=int, default=600)
    ap.add_argument("--batch", type=int, default=8)
    ap.add_argument("--size", type=int, default=96)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--root", type=Path, default=Path(__file__).resolve().parent.parent)
    args = ap.parse_args()

    torch.manual_seed(args.seed)
    rng = np.random.default_rng(args.seed)
    b = args.base_width
    enc = Stack(encoder_layers(b), final_relu=True)
    dec = Stack(decoder_layers(b), final_relu=False)

    pool = [load_rgb(n) for n in TRAIN_IMAGES]

    opt = torch.optim.Adam(list(enc.parameters()) + list(dec.parameters()), lr=2e-3)
    for step in range(args.recon_steps):
        x = random_batch(rng, pool, args.batch, args.size)
        y = denormalize(dec(enc(normalize(x))))
        loss = (y - x).abs().mean()
        opt.zero_grad()
        loss.backward()
        opt.step()
        if step % 100 == 0:
            print(f"recon {step}: l1={loss.item():.4f}", flush=True)

    for p in enc.parameters():
        p.requires_grad_(False)
    taps = {"conv1_1", "conv2_1", "conv3_1", "conv4_1"}
    opt = torch.optim.Adam(dec.parameters(), lr=5e-4)
    for step in range(args.style_steps):
        c = random_batch(rng, pool, args.batch, args.size)
        s = random_batch(rng, pool, args.batch, args.size)
        zc, zs = enc(normalize(c)), enc(normalize(s))
        t = adain(zc, zs)
        g = dec(t)
        zg, fg = enc(g, taps)
        _, fs = enc(normalize(s), taps)
        content = F.mse_loss(zg, t)
        style = sum(F.mse_loss(stats(a)[0], stats(bb)[0]) + F.mse_loss(stats(a)[1], stats(bb)[1])
                    for a, bb in zip(fg, fs))
        recon = (denormalize(dec(zc)) - c).abs().mean()
        loss = content + 2.0 * style + 10.0 * recon
        opt.zero_grad()
        loss.backward()
        opt.step()
        if step % 100 == 0:
            print(f"style {step}: content={content.item():.4f} style={style.item():.4f} "
                  f"recon={recon.item():.4f}", flush=True)

    entries = []
    for prefix, net in (("encoder", enc), ("decoder", dec)):
        for name, _, _, _ in net.spec:
            conv = net.convs[name]
            entries.append((f"{prefix}.{name}.weight", conv.weight.detach().numpy()))
            entries.append((f"{prefix}.{name}.bias", conv.bias.detach().numpy()))
    weights_dir = args.root / "data" / "weights"
    weights_dir.mkdir(parents=True, exist_ok=True)
    write_adwt(weights_dir / f"adain_b{b}.adwt", entries)

    images_dir = args.root / "data" / "images"
    images_dir.mkdir(parents=True, exist_ok=True)
    import PIL.Image
    enc64 = Stack(encoder_layers(b), final_relu=True).double()
    dec64 = Stack(decoder_layers(b), final_relu=False).double()
    enc64.load_state_dict({k: v.double() for k, v in enc.state_dict().items()})
    dec64.load_state_dict({k: v.double() for k, v in dec.state_dict().items()})
    for name in TEST_IMAGES:
        u8 = np.round(to_224(load_rgb(name)) * 255).astype(np.uint8)
        PIL.Image.fromarray(u8).save(images_dir / f"{name}.png")
        x = torch.from_numpy(u8.astype(np.float32) / 255.0).permute(2, 0, 1)[None].double()
        with torch.no_grad():
            y = denormalize(dec64(enc64(normalize(x)))).clamp(0, 1)
        mae = (y - x).abs().mean().item()
        print(f"reconstruction MAE {name}: {mae:.4f}" + (" (held out)" if name not in TRAIN_IMAGES else ""))

    golden_dir = args.root / "tests" / "data"
    golden_dir.mkdir(parents=True, exist_ok=True)
    grng = np.random.default_rng(20260101)
    u8 = grng.integers(0, 256, size=(32, 32, 3), dtype=np.uint8)
    write_ppm(golden_dir / "golden_input.ppm", u8)
    x = torch.from_numpy(u8.astype(np.float32) / 255.0).permute(2, 0, 1)[None].double()
    with torch.no_grad():
        z = enc64(normalize(x))[0].numpy()
    write_adwt(golden_dir / "golden_encode.adwt", [("encode", z.astype(np.float32))])
    print(f"golden encode: shape {z.shape}, max {z.max():.4f}")


if __name__ == "__main__":
    main()
