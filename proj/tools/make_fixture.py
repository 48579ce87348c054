#!/usr/bin/env python3
"""Regenerate data/time_series_covid19_confirmed_global_fixture.csv.

The fixture is a reconstruction in the JHU CSSE global wire format, not a
byte copy of the upstream file. Cumulative confirmed counts are pinned at the
anchor dates below (approximate published totals for 2020), interpolated
monotonically in log space, and the daily increments between anchors are
reshaped by a per-country weekday reporting pattern plus seeded log-normal
noise. Every anchor value is hit exactly.

Usage: python3 tools/make_fixture.py [out.csv]
"""

import datetime as dt
import sys

import numpy as np
from scipy.interpolate import PchipInterpolator

START = dt.date(2020, 1, 22)
END = dt.date(2020, 8, 15)
SEED = 20200122

# (m, d) -> cumulative confirmed
ANCHORS = {
    "India": {
        (1, 29): 0, (1, 30): 1, (2, 2): 2, (2, 3): 3, (3, 1): 3, (3, 2): 5,
        (3, 4): 28, (3, 10): 56, (3, 15): 113, (3, 20): 244, (3, 25): 657,
        (3, 31): 1397, (4, 5): 4289, (4, 10): 7600, (4, 15): 12322,
        (4, 20): 18539, (4, 25): 26283, (4, 30): 34863, (5, 5): 49400,
        (5, 10): 67161, (5, 15): 85940, (5, 20): 112028, (5, 25): 144950,
        (5, 31): 190609, (6, 5): 236184, (6, 10): 286579, (6, 15): 343091,
        (6, 20): 410461, (6, 25): 490401, (6, 30): 585493, (7, 5): 697413,
        (7, 10): 820916, (7, 15): 968876, (7, 20): 1155191,
        (7, 25): 1385522, (7, 31): 1695988, (8, 5): 1964536,
        (8, 10): 2268675, (8, 15): 2589682,
    },
    "US": {
        (1, 22): 1, (1, 24): 2, (1, 26): 5, (2, 1): 8, (2, 10): 11,
        (2, 21): 15, (2, 24): 51, (3, 1): 74, (3, 5): 217, (3, 10): 959,
        (3, 15): 3680, (3, 20): 19100, (3, 25): 65778, (3, 31): 188172,
        (4, 5): 337072, (4, 10): 496535, (4, 15): 636350, (4, 20): 784326,
        (4, 25): 938154, (4, 30): 1069424, (5, 5): 1204351,
        (5, 10): 1329260, (5, 15): 1442824, (5, 20): 1551853,
        (5, 25): 1662302, (5, 31): 1790191, (6, 5): 1897380,
        (6, 10): 2000464, (6, 15): 2114026, (6, 20): 2255119,
        (6, 25): 2422310, (6, 30): 2636414, (7, 5): 2888635,
        (7, 10): 3184573, (7, 15): 3499398, (7, 20): 3833271,
        (7, 25): 4178970, (7, 31): 4562038, (8, 5): 4823890,
        (8, 10): 5085821, (8, 15): 5313055,
    },
    "Brazil": {
        (2, 25): 0, (2, 26): 1, (3, 1): 2, (3, 5): 8, (3, 10): 31,
        (3, 15): 162, (3, 20): 904, (3, 25): 2554, (3, 31): 5717,
        (4, 5): 11130, (4, 10): 19638, (4, 15): 28320, (4, 20): 40743,
        (4, 25): 59324, (4, 30): 87187, (5, 5): 115455, (5, 10): 162699,
        (5, 15): 220291, (5, 20): 291579, (5, 25): 374898,
        (5, 31): 514849, (6, 5): 645771, (6, 10): 772416,
        (6, 15): 888271, (6, 20): 1083341, (6, 25): 1228114,
        (6, 30): 1402041, (7, 5): 1603055, (7, 10): 1800827,
        (7, 15): 1966748, (7, 20): 2118646, (7, 25): 2394513,
        (7, 31): 2662485, (8, 5): 2859073, (8, 10): 3057470,
        (8, 15): 3317096,
    },
}

# Monday..Sunday multipliers on daily new cases.
WEEKDAY = {
    "India": [0.92, 0.95, 1.03, 1.04, 1.04, 1.03, 0.99],
    "US": [0.85, 0.95, 1.05, 1.10, 1.15, 1.10, 0.80],
    "Brazil": [0.70, 1.15, 1.20, 1.15, 1.10, 1.05, 0.65],
}
NOISE_SIGMA = {"India": 0.05, "US": 0.07, "Brazil": 0.12}

LATLONG = {"India": (20.593684, 78.96288), "US": (40.0, -100.0),
           "Brazil": (-14.235, -51.9253)}


def build(country, rng):
    days = (END - START).days + 1
    dates = [START + dt.timedelta(days=i) for i in range(days)]
    anchors = sorted((dt.date(2020, m, d), v)
                     for (m, d), v in ANCHORS[country].items())
    idx = np.array([(a - START).days for a, _ in anchors])
    vals = np.array([v for _, v in anchors], dtype=float)

    cum = np.zeros(days)
    pos = vals > 0
    first = idx[pos][0]
    interp = PchipInterpolator(idx[pos], np.log(vals[pos]))
    t = np.arange(first, idx[-1] + 1)
    cum[first:idx[-1] + 1] = np.exp(interp(t))

    base = np.diff(np.concatenate([[0.0], cum]))
    base = np.maximum(base, 0.0)
    weekday = np.array([WEEKDAY[country][d.weekday()] for d in dates])
    noise = np.exp(rng.normal(0.0, NOISE_SIGMA[country], size=days))
    shaped = base * weekday * noise

    out = np.zeros(days, dtype=np.int64)
    for (a0, v0), (a1, v1) in zip(anchors[:-1], anchors[1:]):
        i0, i1 = (a0 - START).days, (a1 - START).days
        seg = shaped[i0 + 1:i1 + 1]
        total = v1 - v0
        if seg.sum() <= 0.0:
            seg = np.ones_like(seg)
        frac = np.cumsum(seg) / seg.sum()
        out[i0 + 1:i1 + 1] = v0 + np.round(frac * total).astype(np.int64)
        out[i0] = v0
    first_anchor = (anchors[0][0] - START).days
    out[:first_anchor] = 0 if anchors[0][1] == 0 else anchors[0][1]
    return out


def main():
    path = sys.argv[1] if len(sys.argv) > 1 else \
        "data/time_series_covid19_confirmed_global_fixture.csv"
    rng = np.random.default_rng(SEED)
    days = (END - START).days + 1
    dates = [START + dt.timedelta(days=i) for i in range(days)]
    header = ["Province/State", "Country/Region", "Lat", "Long"] + \
        [f"{d.month}/{d.day}/{d.year % 100}" for d in dates]
    with open(path, "w", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for country in ["Brazil", "India", "US"]:
            counts = build(country, rng)
            lat, lon = LATLONG[country]
            f.write(",".join([",".join(["", country, str(lat), str(lon)])] +
                             [str(int(c)) for c in counts]) + "\n")


if __name__ == "__main__":
    main()
