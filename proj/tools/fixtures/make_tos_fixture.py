#!/usr/bin/env python3
# Copyright 2026 The Consent Audit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the 50-domain ToS fixture: annotations.csv and counts.csv.

The unit interval of 10,000 samples is partitioned once per attribute with the
target shares; overlaying the three partitions gives segments with a single
annotation each, which are then split until there are 50 domains. Shares are
therefore exact by construction."""

import pathlib

OUT = pathlib.Path(__file__).resolve().parents[2] / "tests" / "fixtures" / "tos"
TOTAL = 10_000

SCRAPING = [("No scraping", 5710), ("No scraping and AI", 320), ("No AI", 400),
            ("No scraping and AI conditionally", 900), ("Not Mentioned", 2670)]
LICENSE = [("Not Applicable", 4690), ("Personal/Noncommercial/Research Only", 3340),
           ("Conditional Commercial Access", 1200), ("Open or Unrestricted Commercial Use", 770)]
CATEGORY = [("CDN Provider", 2710), ("Website Hosting Service", 1860),
            ("Stock Photo Platform", 1900), ("Marketplace (E-commerce)", 1500),
            ("Content-sharing Community Platform", 1030), ("Blog Service", 600), ("Other", 400)]


def cuts(partition):
    assert sum(w for _, w in partition) == TOTAL
    edges, at = [], 0
    for label, weight in partition:
        edges.append((at, at + weight, label))
        at += weight
    return edges


def label_at(edges, x):
    return next(label for lo, hi, label in edges if lo <= x < hi)


def main():
    parts = [cuts(CATEGORY), cuts(LICENSE), cuts(SCRAPING)]
    points = sorted({0, TOTAL} | {e for p in parts for lo, hi, _ in p for e in (lo, hi)})
    segments = [(lo, hi) for lo, hi in zip(points, points[1:])]
    # Split the widest segment until there are 50.
    while len(segments) < 50:
        widest = max(range(len(segments)), key=lambda i: segments[i][1] - segments[i][0])
        lo, hi = segments.pop(widest)
        mid = lo + (hi - lo) * 2 // 3
        segments[widest:widest] = [(lo, mid), (mid, hi)]
    segments.sort()
    rows = []
    for i, (lo, hi) in enumerate(segments):
        labels = [label_at(p, lo) for p in parts]
        rows.append((f"site{i:02d}.example", hi - lo, labels))
    assert len(rows) == 50 and sum(r[1] for r in rows) == TOTAL
    OUT.mkdir(parents=True, exist_ok=True)
    with (OUT / "annotations.csv").open("w", newline="\n") as f:
        f.write("base_domain,category,license_type,scraping_policy\n")
        for domain, _, (cat, lic, pol) in rows:
            f.write(f'{domain},"{cat}","{lic}","{pol}"\n')
    with (OUT / "counts.csv").open("w", newline="\n") as f:
        f.write("base_domain,count\n")
        for domain, count, _ in rows:
            f.write(f"{domain},{count}\n")


if __name__ == "__main__":
    main()
