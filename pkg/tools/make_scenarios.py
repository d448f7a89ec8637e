"""Regenerate the shipped scenario and script files.

Run from the repo root:  python3 tools/make_scenarios.py
"""

import json
import math
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "swarmsteer" / "scenarios"


def circle_points(cx, cy, r, n=128):
    pts = [
        [cx + r * math.cos(2 * math.pi * k / n), cy + r * math.sin(2 * math.pi * k / n)]
        for k in range(n)
    ]
    pts.append(pts[0][:])  # repeat the start so the stroke closes
    return pts


CIRCLE = circle_points(250.0, 300.0, 250.0)

BASE_WEIGHTS = {"w0": 0.05, "w1": 0.30, "w2": 0.10, "w3": 0.35,
                "eps": 0.01, "C": 40.0, "ks": 100.0, "kf": 1.0}


def write(name, doc):
    path = OUT / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1) + "\n")
    print("wrote", path)


def case1(name, robots, influenced):
    write(name, {
        "robots": robots,
        "fires": [],
        "obstacles": [],
        "topology": [[0, 1], [0, 2], [1, 2]],
        "weights": dict(BASE_WEIGHTS),
        "safety": {"Rr": 15.0, "Ro": 30.0},
        "human_script": [
            {"t": 0.0, "kind": "set_path", "points": CIRCLE},
            {"t": 0.0, "kind": "select_robot", "id": influenced},
        ],
    })


def main():
    case1("case1_outside.json", [[910, 500], [870, 560], [960, 560]], 0)
    case1("case1_inside.json", [[590, 260], [540, 190], [490, 260]], 1)

    write("case2_switch.json", {
        "robots": [[590, 260], [540, 190], [490, 260]],
        "fires": [],
        "obstacles": [],
        "topology": [[0, 1], [0, 2], [1, 2]],
        "weights": dict(BASE_WEIGHTS),
        "safety": {"Rr": 15.0, "Ro": 30.0},
        "human_script": [
            {"t": 0.0, "kind": "set_path", "points": CIRCLE},
            {"t": 0.0, "kind": "select_robot", "id": 2},
            {"t": 60.0, "kind": "select_robot", "id": 0},
        ],
    })

    # Disk and bar obstacles sitting on the circular path.  R_o = 22 sits
    # above both repulsive boundaries (disk 21, bar 17) but deep enough
    # inside the reactive boundaries (disk 30, bar 26) that the blended
    # field has a strong tangential component where the velocity filter
    # would otherwise stall the robot, so it routes around instead.
    write("case3_obstacles.json", {
        "robots": [[590, 260], [540, 190], [490, 260]],
        "fires": [],
        "obstacles": [
            {"kind": "disk", "pos": [250.0, 50.0], "size": 12.0},
            {"kind": "bar", "pos": [250.0, 550.0], "extent": [40.0, 8.0],
             "heading": 1.5707963267948966},
        ],
        "topology": [[0, 1], [0, 2], [1, 2]],
        "weights": dict(BASE_WEIGHTS),
        "safety": {"Rr": 15.0, "Ro": 22.0},
        "human_script": [
            {"t": 0.0, "kind": "set_path", "points": CIRCLE},
            {"t": 0.0, "kind": "select_robot", "id": 2},
        ],
    })

    write("tableI.json", {
        "robots": [[700, 300], [670, 350], [730, 350]],
        "fires": [
            {"pos": [500, 250], "size": 20, "growth": 1.0},
            {"pos": [300, 450], "size": 30, "growth": 0.05},
            {"pos": [170, 120], "size": 50, "growth": 2.0},
            {"pos": [650, 600], "size": 10, "growth": 1.0},
            {"pos": [1100, 300], "size": 40, "growth": 1.0},
        ],
        "obstacles": [
            {"kind": "disk", "pos": [300, 200], "size": 20},
            {"kind": "disk", "pos": [670, 450], "size": 20},
            {"kind": "disk", "pos": [480, 400], "size": 20},
            {"kind": "disk", "pos": [150, 450], "size": 20},
            {"kind": "disk", "pos": [650, 140], "size": 20},
            # Short wall that, together with the first disk, screens the
            # big southwest fire from the robots' starting theater.
            {"kind": "bar", "pos": [380, 205], "extent": [30.0, 6.0],
             "heading": 1.9460421159599547},
            # Long wall hiding the east fire from the whole west side.
            {"kind": "bar", "pos": [950, 375], "extent": [215.0, 16.0],
             "heading": 1.5707963267948966},
        ],
        "topology": [[0, 1], [0, 2], [1, 2]],
        "weights": dict(BASE_WEIGHTS),
        "safety": {"Rr": 15.0, "Ro": 30.0},
        "fire_model": {"W": 30.0, "rho": 1.5, "die_out": 6.0},
    })


if __name__ == "__main__":
    main()
