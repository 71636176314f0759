#!/usr/bin/env python3
"""Regenerates the shipped OCV tables (data/*.csv and core/src/spm/ocv_tables.inc).

Half-cell fits for graphite and NMC811 published by Chen et al. (2020),
sampled on a fixed stoichiometry grid.
"""
import math
import pathlib

ROOT = pathlib.Path(__file__).resolve().parents[2]


def graphite(x):
    return (1.9793 * math.exp(-39.3631 * x) + 0.2482
            - 0.0909 * math.tanh(29.8538 * (x - 0.1234))
            - 0.04478 * math.tanh(14.9159 * (x - 0.2769))
            - 0.0205 * math.tanh(30.4444 * (x - 0.6103)))


def nmc(y):
    return (-0.8090 * y + 4.4875
            - 0.0428 * math.tanh(18.5138 * (y - 0.5542))
            - 17.7326 * math.tanh(15.7890 * (y - 0.3117))
            + 17.5842 * math.tanh(15.9308 * (y - 0.3120)))


def grid(lo, hi, step):
    n = round((hi - lo) / step)
    return [round(lo + i * step, 6) for i in range(n + 1)]


def emit(name, fn, xs):
    rows = [(x, round(fn(x), 7)) for x in xs]
    csv = "stoichiometry,potential_V\n" + "".join(f"{x:.3f},{v:.7f}\n" for x, v in rows)
    (ROOT / "data" / f"ocv_{name}.csv").write_text(csv)
    body = ",\n".join(f"    {{{x:.3f}, {v:.7f}}}" for x, v in rows)
    return f"constexpr OcvPoint k{name.capitalize()}Ocv[] = {{\n{body},\n}};\n"


inc = "// Generated by tools/scripts/gen_ocv_tables.py; do not edit.\n\n"
inc += emit("graphite", graphite, grid(0.0, 1.0, 0.005))
inc += "\n" + emit("nmc", nmc, grid(0.2, 1.0, 0.005))
(ROOT / "core" / "src" / "spm" / "ocv_tables.inc").write_text(inc)
