"""Generate a deterministic stand-in for the LibSVM ``bodyfat`` regression set.

252 examples, 14 features scaled to [-1, 1], label = body density. The
features are driven by three latent factors (frame size, adiposity, age), so
the columns are strongly collinear like the anthropometric originals.

    python tools/make_bodyfat_surrogate.py [output.libsvm]
"""

import sys
from pathlib import Path

import numpy as np

SEED = 20161122
N = 252

# (mean, size loading, adiposity loading, loading per decade of age, noise sd)
# Noise levels were fitted once so the variance inflation factors of the 13
# anthropometric columns land near those reported for the original data
# (weight ~44, hip ~15, abdomen ~13, chest ~10, thigh ~8, others 2-5).
CIRCUMFERENCES = [
    ("weight", 178.0, 20.0, 15.0, 0.0, 1.5),
    ("height", 70.0, 1.8, -0.3, -0.3, 0.45),
    ("neck", 38.0, 1.5, 1.2, 0.3, 1.15),
    ("chest", 100.0, 5.0, 6.0, 0.5, 2.68),
    ("abdomen", 92.0, 4.0, 9.0, 1.0, 1.52),
    ("hip", 100.0, 4.0, 5.0, -0.5, 2.0),
    ("thigh", 59.0, 3.0, 3.5, -0.8, 1.99),
    ("knee", 38.5, 1.5, 0.8, 0.0, 1.0),
    ("ankle", 23.0, 1.0, 0.3, 0.0, 0.66),
    ("biceps", 32.0, 1.8, 1.5, -0.4, 1.63),
    ("forearm", 28.5, 1.2, 0.7, -0.3, 1.09),
    ("wrist", 18.0, 0.8, 0.3, 0.2, 0.55),
]


# Extreme cases documented for the original measurements (0-based rows):
# a 363 lb subject, a 29.5 in height entry, two swollen ankles, a 0% and a
# 47.5% body fat reading. Min-max scaling squeezes the bulk of those columns
# into a narrow band, which is what makes the scaled design ill conditioned.
OUTLIERS = {
    38: {"weight": 363.15, "neck": 51.2, "chest": 136.2, "abdomen": 148.1,
         "hip": 147.7, "thigh": 87.3, "knee": 49.1, "ankle": 29.6,
         "biceps": 45.0, "forearm": 29.0, "wrist": 21.4, "fat": 33.8},
    41: {"height": 29.5},
    30: {"ankle": 33.9},
    85: {"ankle": 33.7},
    181: {"fat": 0.0},
    215: {"fat": 47.5},
}


def generate(rng):
    size = rng.standard_normal(N)
    adiposity = rng.standard_normal(N)
    age = rng.uniform(22.0, 81.0, N)
    fat = np.clip(19.0 + 8.0 * adiposity + 1.5 * (age - 45.0) / 15.0
                  + rng.normal(0.0, 1.0, N), 3.0, 47.0)
    names = ["fat", "age"] + [c[0] for c in CIRCUMFERENCES]
    columns = [fat, age]
    decades = (age - 45.0) / 10.0
    for _, mean, s, a, g, sd in CIRCUMFERENCES:
        columns.append(mean + s * size + a * adiposity + g * decades
                       + rng.normal(0.0, sd, N))
    X = np.column_stack(columns)
    for row, values in OUTLIERS.items():
        for name, value in values.items():
            X[row, names.index(name)] = value
    density = 495.0 / (X[:, 0] + 450.0) + rng.normal(0.0, 5e-4, N)
    lo, hi = X.min(axis=0), X.max(axis=0)
    X = 2.0 * (X - lo) / (hi - lo) - 1.0
    return X, density


def write_libsvm(path, X, y):
    with open(path, "w", encoding="ascii") as out:
        for row, label in zip(X, y):
            feats = " ".join(f"{j + 1}:{v:.6f}" for j, v in enumerate(row))
            out.write(f"{label:.7f} {feats}\n")


def main():
    root = Path(__file__).resolve().parent.parent
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else root / "data" / "bodyfat_surrogate.libsvm"
    X, y = generate(np.random.default_rng(SEED))
    write_libsvm(target, X, y)
    print(f"wrote {target} ({X.shape[0]} x {X.shape[1]})")


if __name__ == "__main__":
    main()
