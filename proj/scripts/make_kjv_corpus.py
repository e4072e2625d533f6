#!/usr/bin/env python3
# Copyright 2026 The crstrie Authors
# Licensed under the Apache License, Version 2.0
"""Flatten the public-domain `kjv` npm package (1769 text) into data/kjv.txt.

Usage: npm pack kjv && tar xzf kjv-1.0.0.tgz
       python3 scripts/make_kjv_corpus.py package/json/verses-1769.json data/kjv.txt
"""
import json
import sys


def main(src, dst):
    with open(src, encoding="utf-8") as f:
        verses = json.load(f)
    with open(dst, "w", encoding="utf-8", newline="\n") as out:
        for ref, text in verses.items():
            text = text.replace("[", "").replace("]", "")
            out.write(f"{ref} {text}\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
