#!/usr/bin/env python3
"""Regenerate data/ from the archived covid19india.org CSV exports.

Not part of the build and never run by the tests. The acceptance binary picks
up data/india_national.csv (or $EPICURVE_NATIONAL_CSV) when it exists.

    tools/fetch_india_data.py                      # national series, default window
    tools/fetch_india_data.py --states MH,KL,DL    # also write data/india_states.csv

The archive's national series has one row per calendar day. The default window
2020-01-30..2020-08-28 is 212 days; pass --start 2020-02-14 for the 197-row
window ending on the same date.
"""
import argparse
import csv
import datetime as dt
import io
import pathlib
import sys
import urllib.request

BASE = "https://data.covid19india.org/csv/latest/"
NATIONAL = BASE + "case_time_series.csv"
STATES = BASE + "state_wise_daily.csv"
HEADER = ["date", "region", "daily_confirmed", "daily_recovered", "daily_deceased"]
ROOT = pathlib.Path(__file__).resolve().parent.parent

STATE_NAMES = {
    "AN": "Andaman and Nicobar Islands", "AP": "Andhra Pradesh", "AR": "Arunachal Pradesh",
    "AS": "Assam", "BR": "Bihar", "CH": "Chandigarh", "CT": "Chhattisgarh",
    "DN": "Dadra and Nagar Haveli and Daman and Diu", "DL": "Delhi", "GA": "Goa",
    "GJ": "Gujarat", "HR": "Haryana", "HP": "Himachal Pradesh", "JK": "Jammu and Kashmir",
    "JH": "Jharkhand", "KA": "Karnataka", "KL": "Kerala", "LA": "Ladakh", "LD": "Lakshadweep",
    "MP": "Madhya Pradesh", "MH": "Maharashtra", "MN": "Manipur", "ML": "Meghalaya",
    "MZ": "Mizoram", "NL": "Nagaland", "OR": "Odisha", "PY": "Puducherry", "PB": "Punjab",
    "RJ": "Rajasthan", "SK": "Sikkim", "TN": "Tamil Nadu", "TG": "Telangana", "TR": "Tripura",
    "UP": "Uttar Pradesh", "UT": "Uttarakhand", "WB": "West Bengal",
}


def fetch(url):
    with urllib.request.urlopen(url, timeout=60) as resp:
        return list(csv.DictReader(io.StringIO(resp.read().decode("utf-8"))))


def in_window(day, start, end):
    return start <= day <= end


def national(rows, start, end):
    out = []
    for row in rows:
        day = dt.date.fromisoformat(row["Date_YMD"])
        if in_window(day, start, end):
            out.append([day.isoformat(), "India", row["Daily Confirmed"], row["Daily Recovered"],
                        row["Daily Deceased"]])
    return out


def states(rows, codes, start, end):
    # One row per (date, status); statuses are Confirmed, Recovered, Deceased.
    by_day = {}
    for row in rows:
        day = dt.date.fromisoformat(row["Date_YMD"])
        if in_window(day, start, end):
            by_day.setdefault(day, {})[row["Status"]] = row
    out = []
    for code in codes:
        for day in sorted(by_day):
            rec = by_day[day]
            counts = [max(0, int(rec[s][code] or 0)) for s in ("Confirmed", "Recovered", "Deceased")]
            out.append([day.isoformat(), STATE_NAMES.get(code, code)] + counts)
    return out


def write(path, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(HEADER)
        w.writerows(rows)
    print(f"wrote {len(rows)} rows to {path}")


def main(argv):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--start", type=dt.date.fromisoformat, default=dt.date(2020, 1, 30))
    ap.add_argument("--end", type=dt.date.fromisoformat, default=dt.date(2020, 8, 28))
    ap.add_argument("--states", default="", help="comma-separated state codes, e.g. MH,KL")
    ap.add_argument("--out-dir", type=pathlib.Path, default=ROOT / "data")
    args = ap.parse_args(argv)

    write(args.out_dir / "india_national.csv", national(fetch(NATIONAL), args.start, args.end))
    codes = [c.strip().upper() for c in args.states.split(",") if c.strip()]
    if codes:
        write(args.out_dir / "india_states.csv", states(fetch(STATES), codes, args.start, args.end))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
