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
"""Writes the labeled notice corpus: "<labels>\\t<text>" per line, where
<labels> is a comma-separated set of categories or "none".

Labels come from the template each string was built from, never from running
a matcher, so the file is an independent ground truth."""

import pathlib
import random
import unicodedata

OUT = (pathlib.Path(__file__).resolve().parents[2] / "tests" / "fixtures" / "notice" /
       "labeled_corpus.tsv")

G = "CopyrightGeneral"
S = "CopyrightSymbol"
C = "CreativeCommons"

# Hand-written anchors. Every string the acceptance list names is here.
FIXED = [
    ({S}, "© John Doe 2025"),
    ({G}, "copr. 1999"),
    ({C}, "CC BY 4.0"),
    ({C}, "licensed CC BY-NC 4.0"),
    ({C}, "CC BY-SA 3.0 via Wikimedia"),
    ({C}, "image under CC BY-ND 2.0"),
    ({C}, "CC BY-NC-SA 4.0 international"),
    ({C}, "released as CC BY-NC-ND 4.0"),
    ({C}, "cc-by-nc-sa 2.5 generic"),
    ({C}, "This work is licensed under a Creative Commons license"),
    ({C}, "CC0 public domain dedication"),
    ({G}, "Copyright 2019 Jane Photographer"),
    ({G}, "All Rights Reserved"),
    ({G, S}, "Copyright © 2020 Acme Corp"),
    ({G, S}, "© 2020 Jane Doe. All rights reserved."),
    ({G, C}, "Copyright 2018 Bob, CC BY 4.0"),
    ({S}, "&copy; 2011 Example Media"),
    ({S}, "(c) 2015 Studio North"),
    ({S}, "photo 2015(c) studio"),
    ({S}, "©Getty"),
    ({G}, "COPYRIGHT GETTY IMAGES"),
    ({G}, "photo copyright by Ann Lee"),
    (set(), "copper wire"),
    (set(), "copper wire copra"),
    (set(), "copra harvest season"),
    (set(), "reserve your seat today"),
    (set(), "all rights to the throne"),
    (set(), "copy writer wanted"),
    (set(), "photocopier repair"),
    (set(), "(c) section of the form"),
    (set(), "ACC bypass valve"),
    (set(), "the year 2025 in review"),
    (set(), "cc: the whole team"),
    (set(), "CCBY"),
    (set(), "creative writing commons room"),
    (set(), "ABCC BY the sea"),
    (set(), "red dress on sale"),
    (set(), "copyrighted"),
    (set(), "c 2025 calendar"),
    (set(), ""),
]

NAMES = ["John Doe", "Maria Garcia", "Wei Zhang", "Getty Images", "Shutterstock",
         "Acme Photo", "Ola Nordmann", "J. Smith", "Studio 54", "Renee Dubois"]
YEARS = ["1999", "2005", "2012", "2019", "2023", "2025"]
CC_FORMS = ["CC BY", "CC BY-SA", "CC BY-ND", "CC BY-NC", "CC BY-NC-SA", "CC BY-NC-ND",
            "CC-BY", "CC-BY-SA", "CC-BY-NC"]
CC_VERSIONS = ["", " 2.0", " 2.5", " 3.0", " 4.0", "-4.0"]

POSITIVE_TEMPLATES = [
    ({G}, "Copyright {year} {name}"),
    ({G}, "copyright {name}"),
    ({G}, "Photo: copyright {name}, used with permission"),
    ({G}, "copr. {year} {name}"),
    ({G}, "{name}. All rights reserved"),
    ({S}, "© {name} {year}"),
    ({S}, "©{year} {name}"),
    ({S}, "&copy; {year} {name}"),
    ({S}, "(c) {year} {name}"),
    ({S}, "(c){year} {name}"),
    ({S}, "{name} {year} (c)"),
    ({G, S}, "Copyright © {year} {name}"),
    ({G, S}, "© {year} {name} - all rights reserved"),
    ({C}, "{name} / {cc}"),
    ({C}, "photo by {name} ({cc})"),
    ({C}, "{name}, Creative Commons"),
    ({G, C}, "Copyright {year} {name}. Licensed {cc}"),
    ({S, C}, "© {name}, {cc}"),
]

NEGATIVE_TEMPLATES = [
    "{name} at the beach in {year}",
    "copper pot by {name}",
    "vintage copra sack {year}",
    "{name} reserved a table",
    "copy of the {year} brochure",
    "{name} holding a cc card",
    "ACCBY {year}",
    "rights of way near {name}",
    "(c) grade work by {name}",
    "{name} copied the file",
]


def nfd_variant(text):
    # Decomposed accents must not change the verdict; the scanner normalizes.
    return unicodedata.normalize("NFD", text)


def main():
    rng = random.Random(1308)
    rows = [(labels, text) for labels, text in FIXED]
    positives = []
    while len(positives) < 116:
        labels, template = rng.choice(POSITIVE_TEMPLATES)
        cc = rng.choice(CC_FORMS) + rng.choice(CC_VERSIONS)
        text = template.format(name=rng.choice(NAMES), year=rng.choice(YEARS), cc=cc)
        positives.append((labels, text))
    negatives = []
    while len(negatives) < 42:
        template = rng.choice(NEGATIVE_TEMPLATES)
        negatives.append((set(), template.format(name=rng.choice(NAMES), year=rng.choice(YEARS))))
    rows += positives + negatives
    rows.append(({S}, nfd_variant("© Renée Dübois 2021")))
    rows.append((set(), nfd_variant("café crème 2021")))
    assert len(rows) == 200, len(rows)

    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w", encoding="utf-8", newline="\n") as f:
        for labels, text in rows:
            assert "\t" not in text and "\n" not in text
            label = ",".join(sorted(labels)) if labels else "none"
            f.write(f"{label}\t{text}\n")


if __name__ == "__main__":
    main()
