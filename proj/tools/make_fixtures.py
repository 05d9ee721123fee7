"""Writes the simulation designs under data/.

pb24_16.csv   first 16 columns of the cyclic 24-run Plackett-Burman design
ess18_22.csv  18-run, 22-factor balanced design with small E(s^2), found by a
              seeded column-swap search
"""
import itertools
import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parent.parent / "data"
NAMES = [chr(ord("A") + k) for k in range(26)]


def cyclic_pb(generator):
    g = np.array([1 if c == "+" else -1 for c in generator])
    k = len(g)
    rows = [np.roll(g, -r) for r in range(k)]
    rows.append(-np.ones(k, dtype=int))
    return np.array(rows)


def e_s2(d):
    s = d.T @ d
    m = d.shape[1]
    return (np.sum(s**2) - np.trace(s**2)) / (m * (m - 1))


def ess_search(n, m, seed, sweeps=400):
    rng = np.random.default_rng(seed)
    base = np.array([1] * (n // 2) + [-1] * (n // 2))
    d = np.column_stack([rng.permutation(base) for _ in range(m)])
    best = e_s2(d)
    for _ in range(sweeps):
        improved = False
        for j in range(m):
            plus = np.flatnonzero(d[:, j] == 1)
            minus = np.flatnonzero(d[:, j] == -1)
            for a, b in itertools.product(plus, minus):
                d[a, j], d[b, j] = -1, 1
                v = e_s2(d)
                if v < best - 1e-12:
                    best = v
                    improved = True
                    break
                d[a, j], d[b, j] = 1, -1
        if not improved:
            break
    return d, best


def write(path, d):
    with open(path, "w") as f:
        f.write(",".join(NAMES[: d.shape[1]]) + "\n")
        for row in d:
            f.write(",".join(str(int(v)) for v in row) + "\n")


def main():
    pb24 = cyclic_pb("+++++-+-++--++--+-+----")[:, :16]
    assert np.allclose(pb24.T @ pb24, 24 * np.eye(16))
    write(OUT / "pb24_16.csv", pb24)

    d, score = ess_search(18, 22, seed=20)
    assert len({tuple(c) for c in d.T} | {tuple(-c) for c in d.T}) == 44
    write(OUT / "ess18_22.csv", d)
    print(f"E(s^2) of ess18_22: {score:.3f}")


if __name__ == "__main__":
    main()
