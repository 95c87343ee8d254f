#!/usr/bin/env python3
"""Regenerates the synthetic test fixtures in this directory.

None of these series are real surveillance data. They only reproduce the
shape properties the tests rely on (value ranges, onset offsets).
"""
import datetime as dt
import math
import pathlib

HERE = pathlib.Path(__file__).resolve().parent
HEADER = "date,region,daily_confirmed,daily_recovered,daily_deceased\n"


def rows(region, start, confirmed, recovered=None, deceased=None):
    n = len(confirmed)
    recovered = recovered or [0] * n
    deceased = deceased or [0] * n
    out = []
    for k in range(n):
        day = start + dt.timedelta(days=k)
        out.append(f"{day.isoformat()},{region},{confirmed[k]},{recovered[k]},{deceased[k]}\n")
    return out


def five_point():
    return HEADER + "".join(rows("Sample", dt.date(2020, 3, 1), [0, 1, 2, 3, 4]))


def wide_range():
    # 168 days, daily confirmed rising smoothly from exactly 3 to exactly 14888.
    n = 168
    lo, hi = 3, 14888
    span = 1 - math.exp(-(n - 1) / 50)
    confirmed = [round(lo * math.exp(math.log(hi / lo) * (1 - math.exp(-k / 50)) / span)) for k in range(n)]
    confirmed[0], confirmed[-1] = lo, hi
    recovered = [0] * 14 + [round(0.7 * c) for c in confirmed[:-14]]
    deceased = [0] * 21 + [round(0.02 * c) for c in confirmed[:-21]]
    return HEADER + "".join(rows("WideRange", dt.date(2020, 3, 14), confirmed, recovered, deceased))


def onset_pair():
    # Both series start on 2020-03-01; first cases on 2020-03-02 and 2020-03-17.
    n = 60
    start = dt.date(2020, 3, 1)

    def series(onset):
        return [0 if k < onset else round(2 * math.exp(0.08 * (k - onset))) for k in range(n)]

    return HEADER + "".join(rows("StateA", start, series(1)) + rows("StateB", start, series(16)))


def main():
    (HERE / "five_point.csv").write_text(five_point())
    (HERE / "wide_range.csv").write_text(wide_range())
    (HERE / "onset_pair.csv").write_text(onset_pair())


if __name__ == "__main__":
    main()
