#!/usr/bin/env python3
"""Verify the vendored OEIS fixtures against the checksums in the manifest."""

import hashlib
import json
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
OEIS_DIR = os.path.join(os.path.dirname(HERE), "tests", "fixtures", "oeis")


def main():
    with open(os.path.join(OEIS_DIR, "manifest.json")) as f:
        manifest = json.load(f)
    bad = 0
    for a_number, entry in sorted(manifest.items()):
        path = os.path.join(OEIS_DIR, entry["file"])
        with open(path, "rb") as f:
            sha = hashlib.sha256(f.read()).hexdigest()
        if sha != entry["sha256"]:
            print(f"FAIL {a_number}: checksum mismatch for {entry['file']}")
            bad += 1
        else:
            print(f"ok   {a_number} {entry['file']}")
    if bad:
        return 1
    print(f"{len(manifest)} fixtures verified")
    return 0


if __name__ == "__main__":
    sys.exit(main())
