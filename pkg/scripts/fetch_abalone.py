#!/usr/bin/env python3
"""Download the UCI abalone table and verify it byte-for-byte.

The repository ships data/abalone.data already; this script exists to
re-fetch it from the source of record (or to validate a local copy with
--check-only).  The expected digest pins the exact 4177-row file every
test and experiment in this repository assumes.
"""

import argparse
import hashlib
import sys
import urllib.request
from pathlib import Path

URL = "https://archive.ics.uci.edu/ml/machine-learning-databases/abalone/abalone.data"
SHA256 = "de37cdcdcaaa50c309d514f248f7c2302a5f1f88c168905eba23fe2fbc78449f"
DEFAULT_DEST = Path(__file__).resolve().parent.parent / "data" / "abalone.data"


def digest(data):
    return hashlib.sha256(data).hexdigest()


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dest", type=Path, default=DEFAULT_DEST,
                    help=f"where to put the file (default: {DEFAULT_DEST})")
    ap.add_argument("--check-only", action="store_true",
                    help="verify an existing file; do not touch the network")
    args = ap.parse_args(argv)

    if args.dest.exists():
        got = digest(args.dest.read_bytes())
        if got == SHA256:
            print(f"{args.dest}: present and verified (sha256 {got[:12]}...)")
            return 0
        if args.check_only:
            print(f"{args.dest}: sha256 mismatch\n  expected {SHA256}\n"
                  f"  got      {got}", file=sys.stderr)
            return 1
        print(f"{args.dest}: sha256 mismatch, re-downloading")
    elif args.check_only:
        print(f"{args.dest}: missing", file=sys.stderr)
        return 1

    print(f"fetching {URL}")
    with urllib.request.urlopen(URL) as resp:
        data = resp.read()
    got = digest(data)
    if got != SHA256:
        print(f"downloaded file does not match the pinned digest\n"
              f"  expected {SHA256}\n  got      {got}", file=sys.stderr)
        return 1
    args.dest.parent.mkdir(parents=True, exist_ok=True)
    args.dest.write_bytes(data)
    print(f"wrote {args.dest} ({len(data)} bytes, sha256 verified)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
