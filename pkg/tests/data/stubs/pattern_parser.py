#!/usr/bin/env python3
"""Stub parser: accepts or rejects fixture files according to a 0/1 pattern.

Usage: pattern_parser.py PATTERN FILE
The file's two-digit suffix indexes the pattern; a '0' there makes the stub
write a parse error to stderr and exit nonzero, otherwise it stays silent.
"""

import os
import sys

pattern, path = sys.argv[1], sys.argv[2]
index = int(os.path.basename(path)[-2:]) - 1
if pattern[index] != "1":
    sys.stderr.write(f"parse error in {os.path.basename(path)}\n")
    sys.exit(1)
