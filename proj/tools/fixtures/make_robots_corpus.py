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
"""Generates a robots.txt corpus and records the agent->rules grouping that
Python's urllib.robotparser derives from each file. The C++ parser test
compares against reference_groups.json."""

import json
import pathlib
import random
import urllib.robotparser

OUT = pathlib.Path(__file__).resolve().parents[2] / "tests" / "fixtures" / "robots" / "corpus"

AGENTS = ["GPTBot", "CCBot", "Bytespider", "googlebot-image", "claudebot",
          "ClaudeBot", "Google-Extended", "FacebookBot", "Amazonbot", "omgili",
          "anthropic-ai", "PerplexityBot", "Bingbot", "Twitterbot", "Yandex"]
PATHS = ["/", "", "/private/", "/search", "/cgi-bin/", "/img/", "/tmp/x.html",
         "/wp-admin/", "/api/v1/"]


def make_file(rng):
    lines = []
    used = set()
    star_used = False
    for _ in range(rng.randint(1, 5)):
        if rng.random() < 0.3:
            lines.append("# " + rng.choice(["generated", "robots for site", "ai crawlers"]))
        agents = []
        for _ in range(rng.randint(1, 3)):
            if not star_used and rng.random() < 0.25:
                agents.append("*")
                star_used = True
            else:
                agents.append(rng.choice(AGENTS))
        for agent in agents:
            key = rng.choice(["User-agent", "user-agent", "User-Agent", "USER-AGENT"])
            comment = " # bot" if rng.random() < 0.1 else ""
            lines.append(f"{key}: {agent}{comment}")
            used.add(agent)
        for _ in range(rng.randint(1, 4)):
            path = rng.choice(PATHS)
            if path == "" or rng.random() < 0.65:
                kind = rng.choice(["Disallow", "disallow", "DISALLOW"])
            else:
                kind = rng.choice(["Allow", "allow"])
            lines.append(f"{kind}: {path}")
        if rng.random() < 0.2:
            lines.append(f"Crawl-delay: {rng.randint(1, 10)}")
        lines.append("")
    if rng.random() < 0.4:
        lines.append("Sitemap: https://example.com/sitemap.xml")
    return "\n".join(lines) + "\n"


def reference_groups(text):
    parser = urllib.robotparser.RobotFileParser()
    parser.parse(text.splitlines())
    entries = list(parser.entries)
    if parser.default_entry is not None:
        entries.append(parser.default_entry)
    groups = {}
    for entry in entries:
        for agent in entry.useragents:
            rules = groups.setdefault(agent, [])
            for rule in entry.rulelines:
                # robotparser rewrites an empty Disallow into an empty Allow.
                if rule.path == "" and rule.allowance:
                    rules.append(["Disallow", ""])
                else:
                    rules.append(["Allow" if rule.allowance else "Disallow", rule.path])
    return groups


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20261019)
    reference = {}
    for i in range(50):
        name = f"corpus_{i:02d}.txt"
        text = make_file(rng)
        (OUT / name).write_text(text)
        reference[name] = reference_groups(text)
    (OUT / "reference_groups.json").write_text(json.dumps(reference, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
