#!/usr/bin/env python3
"""Independent reference values for the link-budget, texting and cost tests.

Written against the formulas directly with plain floats and exact fractions;
it does not import or call the Rust code. Run it and compare with the frozen
constants in the Rust tests.
"""
import itertools
import math
from fractions import Fraction as F

C = 2.998e8


def path_loss_db(d_m, f_hz):
    return 10 * math.log10((4 * math.pi * d_m * f_hz / C) ** 2)


def noise_dbm(bw_hz, nf_db):
    return -174 + 10 * math.log10(bw_hz) + nf_db


def to_mw(dbm):
    return 10 ** (dbm / 10)


def sinr_db(s, interferers, n):
    return 10 * math.log10(to_mw(s) / (sum(to_mw(i) for i in interferers) + to_mw(n)))


TX = [("A", 4, 4), ("B", 4, 4), ("C", 8, 8), ("D", 14, 14), ("E", 14, 14)]
IX = [("A", 4.1, 14.1), ("B", 4.1, 4.1), ("C", 8.1, 8.1), ("D", 14.1, 4.1), ("E", 14.1, 14.1)]
GENS = [("2G", 850e6, 6.8e6), ("3G", 1.9e9, 25e6), ("4G", 3.5e9, 100e6), ("5G", 26e9, 30e9)]


def dist_m(ax, ay, bx, by):
    return max(math.hypot(ax - bx, ay - by) * 1000, 1.0)


def cell(x, y, f, bw):
    n = noise_dbm(bw, 5)
    ip = [40 - path_loss_db(dist_m(x, y, ix, iy), f) for _, ix, iy in IX]
    best = None
    for tid, tx, ty in TX:
        s = 40 - path_loss_db(dist_m(x, y, tx, ty), f)
        v = sinr_db(s, ip, n)
        if best is None or v > best[1]:
            best = (tid, v, s)
    agg = 10 * math.log10(sum(to_mw(i) for i in ip))
    return best, agg, n


W = {
    "w1": [F(1, 10), F(2, 10), F(3, 10), F(4, 10), F(45, 100)],
    "w2": [F(1, 10), F(2, 10), F(3, 10), F(45, 100), F(45, 100)],
    "w3": [F(2, 10), F(2, 10), F(3, 10), F(45, 100), F(45, 100)],
}
W["w4"] = W["w3"]
W["w5"] = W["w3"]
I1 = [F(1, 10), F(2, 10), F(3, 10), F(4, 10)]
MODES = {"baseline": ["w1"], "partial": ["w1", "w2", "w3"], "full": ["w1", "w2", "w3", "w4", "w5"]}


def exact(mode):
    sets = [W[w] for w in MODES[mode]] + [I1]
    total = 0
    raw = F(0)
    clipped = F(0)
    delivered = 0
    for combo in itertools.product(*sets):
        p = sum(combo[:-1]) - combo[-1]
        raw += p
        c = min(max(p, F(0)), F(1))
        clipped += c
        delivered += c >= F(1, 2)
        total += 1
    return total, raw / total, clipped / total, F(delivered, total)


if __name__ == "__main__":
    print("path_loss(1000 m, 850 MHz) =", repr(path_loss_db(1000, 850e6)))
    print("path_loss(2000 m, 850 MHz) =", repr(path_loss_db(2000, 850e6)))
    print("20 log10 2 =", repr(20 * math.log10(2)))
    print("noise 2G =", repr(noise_dbm(6.8e6, 5)))
    print("sinr(-50, [-100], -100) =", repr(sinr_db(-50, [-100], -100)))
    print("distance (4,4)-(8,8) m =", repr(math.hypot(4, 4) * 1000))
    for name, f, bw in GENS:
        (tid, v, s), agg, n = cell(0, 0, f, bw)
        print(f"cell(0,0) {name}: best={tid} sinr={v!r} rx={s!r} interf={agg!r} noise={n!r}")
    for name, f, bw in GENS:
        (tid, v, s), agg, n = cell(8, 8, f, bw)
        print(f"cell(8,8) {name}: best={tid} sinr={v!r}")
    # ordering across generations at every lattice cell
    bad = 0
    for y in range(16):
        for x in range(16):
            vals = [cell(x, y, f, bw)[0][1] for _, f, bw in GENS]
            bad += any(vals[i] < vals[i + 1] for i in range(3))
    print("generation-ordering violations:", bad)
    print("row y=14 interference 2G:", [round(cell(x, 14, 850e6, 6.8e6)[1], 4) for x in range(16)])
    for m in MODES:
        total, raw, clipped, dp = exact(m)
        print(f"exact {m}: combos={total} E[raw]={raw} ({float(raw)!r}) "
              f"E[clipped]={clipped} ({float(clipped)!r}) P(deliver)={dp} ({float(dp)!r})")
