"""Regenerates the bundled example datasets (deterministic)."""

import json
from pathlib import Path

import numpy as np

HERE = Path(__file__).resolve().parent
N = 500


def write(name, columns, frame):
    header = ",".join(c["name"] for c in columns)
    with open(HERE / f"{name}.csv", "w") as f:
        f.write(header + "\n")
        for row in frame:
            f.write(",".join(row) + "\n")
    with open(HERE / f"{name}.schema.json", "w") as f:
        json.dump({"na_token": "NA", "columns": columns}, f, indent=2)
        f.write("\n")


def fmt(x):
    return f"{x:.6f}"


def gaussian(rng):
    means = np.array([5.0, -3.0, 10.0, 2.0])
    sds = np.array([1.0, 2.0, 0.5, 3.0])
    corr = np.array(
        [
            [1.0, 0.7, 0.5, 0.3],
            [0.7, 1.0, 0.6, 0.4],
            [0.5, 0.6, 1.0, 0.5],
            [0.3, 0.4, 0.5, 1.0],
        ]
    )
    cov = corr * np.outer(sds, sds)
    x = rng.multivariate_normal(means, cov, size=N)
    cols = [{"name": f"g{j + 1}", "kind": "numeric"} for j in range(4)]
    write("gaussian", cols, [[fmt(v) for v in row] for row in x])


def two_cluster(rng):
    label = rng.random(N) < 0.5
    centers = np.where(label[:, None], np.array([4.0, 4.0, -2.0, 6.0]), np.array([0.0, 0.0, 2.0, 1.0]))
    x = centers + rng.normal(scale=[1.0, 1.0, 0.8, 1.2], size=(N, 4))
    cols = [{"name": f"c{j + 1}", "kind": "numeric"} for j in range(4)]
    write("two_cluster", cols, [[fmt(v) for v in row] for row in x])


def mixed(rng):
    z = rng.normal(size=N)
    x1 = 10.0 + 2.0 * z + rng.normal(scale=0.8, size=N)
    x2 = -1.0 + z + rng.normal(scale=0.6, size=N)
    x3 = np.exp(0.4 * z + rng.normal(scale=0.3, size=N))
    # Colour follows z through ordered thresholds with noise; size follows x3.
    score = z + rng.normal(scale=0.7, size=N)
    colour = np.select([score < -0.5, score < 0.6], ["red", "green"], "blue")
    size = np.where(x3 + rng.normal(scale=0.3, size=N) > 1.1, "large", "small")
    cols = [
        {"name": "x1", "kind": "numeric"},
        {"name": "x2", "kind": "numeric"},
        {"name": "x3", "kind": "numeric"},
        {"name": "colour", "kind": "categorical", "categories": ["red", "green", "blue"]},
        {"name": "size", "kind": "categorical", "categories": ["small", "large"]},
    ]
    rows = [[fmt(a), fmt(b), fmt(c), d, e] for a, b, c, d, e in zip(x1, x2, x3, colour, size)]
    write("mixed", cols, rows)


def main():
    rng = np.random.default_rng(20240601)
    gaussian(rng)
    two_cluster(rng)
    mixed(rng)


if __name__ == "__main__":
    main()
