#!/usr/bin/env python3
"""Writes data/subway_lines.geojson: a synthetic city-scale subway network.

Lines are drawn in local metres and converted to lon/lat around a fixed
anchor. Paired local/express services share corridors on tracks a few
metres apart; crosstown lines cross the trunks; two lines share a trunk
and then branch.
"""
import json
import math
import pathlib

ANCHOR_LON = -73.95
ANCHOR_LAT = 40.73
R = 6371000.0
TRACK_GAP = 5.0


def to_lonlat(x, y):
    lat = ANCHOR_LAT + math.degrees(y / R)
    lon = ANCHOR_LON + math.degrees(x / (R * math.cos(math.radians(ANCHOR_LAT))))
    return [round(lon, 7), round(lat, 7)]


def shifted(points, dx, dy=0.0):
    return [(x + dx, y + dy) for x, y in points]


WEST = [(-1200, -9000), (-1200, 6000), (-1800, 14000)]
MID = [(0, -10000), (0, 9000)]
EAST = [(1500, -8500), (1500, 7000), (3500, 13000)]

LINES = [
    ("1", "local", WEST),
    ("2", "express", [(500, -15000)] + shifted(WEST[:2], TRACK_GAP) + [(-400, 14000)]),
    ("C", "local", MID),
    ("A", "express", [(6000, -14000)] + shifted(MID, TRACK_GAP) + [(500, 16000)]),
    ("6", "local", EAST),
    ("4", "express", [(3000, -16000)] + shifted(EAST[:2], TRACK_GAP) + [(2500, 14500)]),
    ("L", "local", [(-3000, 1000), (8000, 1000), (10000, -3000)]),
    ("7", "local", [(-1500, 4000), (9000, 5500)]),
    ("G", "local", [(4000, -12000), (5000, -3000), (6000, 3000)]),
    ("S", "local", [(-1200, 3000), (1500, 3000)]),
    ("Q", "express", [(0, 2000), (3000, -2000), (3500, -14000)]),
    ("N", "local", shifted([(0, 2000), (3000, -2000), (3500, -14000)], TRACK_GAP)),
]


def main():
    features = []
    for name, kind, pts in LINES:
        features.append({
            "type": "Feature",
            "properties": {"name": name, "kind": kind},
            "geometry": {"type": "LineString", "coordinates": [to_lonlat(x, y) for x, y in pts]},
        })
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "subway_lines.geojson"
    out.write_text(json.dumps({"type": "FeatureCollection", "features": features}, indent=1) + "\n")
    print(f"wrote {out} ({len(features)} lines)")


if __name__ == "__main__":
    main()
