#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
# Plot the files written by `python -m osscp solve`: python plotResults.py [result directory]
#
from __future__ import print_function
import csv
import os
import sys
import matplotlib.pyplot as plt

directory = sys.argv[1] if len(sys.argv) > 1 else "out"


def read(name):
    with open(os.path.join(directory, name)) as f:
        return list(csv.DictReader(f))


overlays = read("overlays.csv")
final = {}
for row in overlays:
    final[row["run_id"]] = max(final.get(row["run_id"], 0), int(row["overlay"]))

terrain_path = os.path.join(directory, "terrain.csv")
if os.path.exists(terrain_path):
    terrain = read("terrain.csv")
    plt.tricontourf([float(r["x"]) for r in terrain], [float(r["y"]) for r in terrain],
                    [float(r["cost"]) for r in terrain], 20, cmap='RdBu_r')

for row in read("obstacles.csv"):
    plt.gca().add_patch(plt.Circle((float(row["cx"]), float(row["cy"])), float(row["R"]), color='black', alpha=0.4))

for run_id, last in sorted(final.items()):
    rows = [r for r in overlays if r["run_id"] == run_id and int(r["overlay"]) == last]
    plt.plot([float(r["x"]) for r in rows], [float(r["y"]) for r in rows], label="%s (%d iterations)" % (run_id, last))

for row in read("summary.csv"):
    print("%-18s %-14s %s" % (row["method"], row["guess"], row["cost"]))

plt.axis('equal')
plt.xlabel('x / m')
plt.ylabel('y / m')
plt.legend()
plt.show()
