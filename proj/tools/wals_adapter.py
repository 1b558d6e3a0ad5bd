#!/usr/bin/env python3
"""Convert an official WALS CLDF export to the canonical 3-column CSV.

The toolkit consumes "language,feature,value" rows. The official dump
(https://wals.info, CLDF layout) spreads that over languages.csv,
parameters.csv, codes.csv and values.csv; this script joins them.

Usage:
    wals_adapter.py CLDF_DIR [-o wals.csv]
"""

import argparse
import csv
import pathlib
import sys


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as handle:
        yield from csv.DictReader(handle)


def pick(row, *candidates):
    for key in candidates:
        if key in row and row[key]:
            return row[key]
    return None


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("cldf_dir", type=pathlib.Path, help="directory of the CLDF export")
    parser.add_argument("-o", "--output", type=pathlib.Path, default=None)
    args = parser.parse_args()

    languages = {
        row["ID"]: pick(row, "Name", "ID")
        for row in read_rows(args.cldf_dir / "languages.csv")
    }
    parameters = {
        row["ID"]: f'{row["ID"]} {pick(row, "Name", "ID")}'
        for row in read_rows(args.cldf_dir / "parameters.csv")
    }
    codes = {}
    codes_path = args.cldf_dir / "codes.csv"
    if codes_path.exists():
        codes = {row["ID"]: pick(row, "Name", "ID") for row in read_rows(codes_path)}

    out = open(args.output, "w", newline="", encoding="utf-8") if args.output else sys.stdout
    writer = csv.writer(out)
    writer.writerow(["language", "feature", "value"])
    emitted = 0
    for row in read_rows(args.cldf_dir / "values.csv"):
        language = languages.get(row.get("Language_ID"))
        feature = parameters.get(row.get("Parameter_ID"))
        value = codes.get(row.get("Code_ID")) or pick(row, "Value")
        if not (language and feature and value):
            continue
        writer.writerow([language, feature, value])
        emitted += 1
    if args.output:
        out.close()
    print(f"wrote {emitted} rows", file=sys.stderr)


if __name__ == "__main__":
    main()
