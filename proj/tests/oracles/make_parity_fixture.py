# Copyright (c) 2026 The igprm Authors
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

"""Reference forward pass for the cost network, used to freeze parity fixtures.

Independent of the C++ code: the network is rebuilt from torch primitives and
the IGPW container is written by hand. Writes, for each k:

  weights_k{K}.igpw  network weights (torch default init, seeded)
  parity_k{K}.igpw   tensors parity_input [1,4,64,64], parity_embedding [K],
                     parity_output [1,1,64,64]

Usage: python3 make_parity_fixture.py OUT_DIR [--seed S] [--k 8 16]
"""

import argparse
import json
import pathlib
import struct

import torch
import torch.nn as nn
import torch.nn.functional as F

WIDTHS = (32, 64, 128)


class CostNet(nn.Module):
    def __init__(self, k, widths=WIDTHS):
        super().__init__()
        w0, w1, w2 = widths
        self.k = k
        self.convs = nn.ModuleDict()
        specs = [
            ("enc0", 4 + k, w0), ("enc1", w0, w1), ("bott", w1, w2),
            ("dec1", w2 + w1, w1), ("dec0", w1 + w0, w0),
        ]
        for name, cin, cout in specs:
            self.convs[name + "_conv1"] = nn.Conv2d(cin, cout, 3, padding=1)
            self.convs[name + "_conv2"] = nn.Conv2d(cout, cout, 3, padding=1)
        self.head = nn.Conv2d(w0, 1, 1)

    def block(self, name, x):
        x = F.relu(self.convs[name + "_conv1"](x))
        return F.relu(self.convs[name + "_conv2"](x))

    def forward(self, planes, emb):
        n, _, h, w = planes.shape
        x = torch.cat([planes, emb.view(n, self.k, 1, 1).expand(n, self.k, h, w)], dim=1)
        e0 = self.block("enc0", x)
        e1 = self.block("enc1", F.max_pool2d(e0, 2))
        b = self.block("bott", F.max_pool2d(e1, 2))
        d1 = self.block("dec1", torch.cat([F.interpolate(b, scale_factor=2, mode="nearest"), e1], dim=1))
        d0 = self.block("dec0", torch.cat([F.interpolate(d1, scale_factor=2, mode="nearest"), e0], dim=1))
        return torch.sigmoid(self.head(d0))

    def named_tensors(self):
        out = []
        for name in ("enc0", "enc1", "bott", "dec1", "dec0"):
            for conv in ("conv1", "conv2"):
                m = self.convs[name + "_" + conv]
                out.append((f"{name}.{conv}.weight", m.weight))
                out.append((f"{name}.{conv}.bias", m.bias))
        out.append(("head.weight", self.head.weight))
        out.append(("head.bias", self.head.bias))
        return out


def write_igpw(path, descriptor, tensors):
    desc = dict(descriptor)
    desc["tensors"] = [name for name, _ in tensors]
    blob = json.dumps(desc, separators=(",", ":")).encode()
    with open(path, "wb") as f:
        f.write(b"IGPW")
        f.write(struct.pack("<II", 1, len(blob)))
        f.write(blob)
        for name, t in tensors:
            t = t.detach().to(torch.float32).contiguous()
            raw = name.encode()
            f.write(struct.pack("<H", len(raw)))
            f.write(raw)
            f.write(struct.pack("<B", t.dim()))
            f.write(struct.pack("<" + "I" * t.dim(), *t.shape))
            f.write(struct.pack("<" + "f" * t.numel(), *t.flatten().tolist()))


def make(out_dir, k, seed):
    torch.manual_seed(seed * 1000 + k)
    net = CostNet(k).eval()
    planes = torch.rand(1, 4, 64, 64)
    emb = torch.randn(k)
    emb = emb / emb.norm()
    with torch.no_grad():
        out = net(planes, emb.view(1, k))
    write_igpw(out_dir / f"weights_k{k}.igpw", {"k": k, "widths": list(WIDTHS)}, net.named_tensors())
    write_igpw(
        out_dir / f"parity_k{k}.igpw", {"k": k, "seed": seed},
        [("parity_input", planes), ("parity_embedding", emb), ("parity_output", out)])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out_dir", type=pathlib.Path)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--k", type=int, nargs="+", default=[8, 16])
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    torch.set_num_threads(1)
    for k in args.k:
        make(args.out_dir, k, args.seed)


if __name__ == "__main__":
    main()
