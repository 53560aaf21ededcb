#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the FigScript corpora under tests/golden.

determinism/: 200 drawable programs covering every statement kind.
adversarial/: programs built to hit the statement, instruction and plot limits.
"""
import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "golden"


def coord(rng):
    return rng.randint(-9, 9)


def pt(rng):
    return f"({coord(rng)}, {coord(rng)})"


def determinism_program(rng, idx):
    lines = []
    if rng.random() < 0.3:
        lo, hi = rng.randint(-12, -2), rng.randint(2, 12)
        lines.append(f"window({lo}, {hi}, {lo}, {hi})")
    names = []
    for k in range(rng.randint(2, 10)):
        choice = rng.randrange(10)
        n = f"v{k}"
        if choice == 0:
            lines.append(f"{n} = point{pt(rng)}")
            names.append(n)
        elif choice == 1:
            lines.append(f"{n} = segment({pt(rng)}, {pt(rng)})")
        elif choice == 2:
            lines.append(f"{n} = circle({pt(rng)}, {rng.randint(1, 7)})")
        elif choice == 3:
            a, b = pt(rng), pt(rng)
            if a == b:
                b = f"({coord(rng) + 20}, 0)"
            lines.append(f"{n} = line({a}, {b})")
        elif choice == 4:
            verts = ", ".join(pt(rng) for _ in range(rng.randint(3, 6)))
            lines.append(f"{n} = polygon({verts})")
        elif choice == 5:
            expr = rng.choice(["x*x - 4", "sin(x)", "x*x*x / 10", "abs(x) - 2", "cos(2*x) * 3", "exp(x / 4)"])
            lo = rng.randint(-8, -1)
            lines.append(f"plot({expr}, {lo}, {rng.randint(1, 8)})")
        elif choice == 6:
            lines.append(f'label({pt(rng)}, "{rng.choice(["A", "B", "P", "Q1", "xy", "O"])}")')
        elif choice == 7:
            lines.append(f"{n} = distance({pt(rng)}, {pt(rng)})")
        elif choice == 8:
            lines.append(f"{n} = count(intersect(circle({pt(rng)}, {rng.randint(2, 6)}), "
                         f"line(({coord(rng)}, -10), ({coord(rng)}, 10))))")
        else:
            lines.append(f"{n} = crossings(segment({pt(rng)}, {pt(rng)}), segment({pt(rng)}, {pt(rng)}))")
    # Guarantee something drawable.
    lines.append(f"s{idx} = segment({pt(rng)}, ({coord(rng) + 20}, {coord(rng)}))")
    return "\n".join(lines) + "\n"


def adversarial_programs():
    progs = {}
    progs["max_statements"] = "".join(f"p{i} = point({i % 17}, {i % 13})\n" for i in range(256))
    progs["over_statements"] = "".join(f"p{i} = point({i % 17}, {i % 13})\n" for i in range(257))
    progs["dense_plots"] = "".join(f"plot(sin({i}*x) * 5, -100, 100)\n" for i in range(1, 256))
    progs["dense_plots_steep"] = "".join(f"plot(exp(x) * {i}, -50, 50)\n" for i in range(1, 200))
    progs["many_circles"] = "".join(f"circle((0, 0), {i * 40})\n" for i in range(1, 256))
    progs["huge_lattice"] = "k = lattice(polygon((0,0),(100000,0),(0,100000)))\n"
    progs["lattice_chain"] = "".join(f"k{i} = lattice(polygon((0,0),({200 + i},0),(0,{200 + i})))\n" for i in range(200))
    progs["expr_chain"] = "a0 = 1\n" + "".join(
        f"a{i} = a{i-1} * 1 + a{i-1} - a{i-1} + sqrt(abs(a{i-1}))\n" for i in range(1, 256))
    progs["deep_nesting"] = "d = " + "abs(" * 30 + "1" + ")" * 30 + "\npoint(d, d)\n"
    progs["wide_crossings"] = "n = crossings(" + ", ".join(
        f"segment(({i}, 0), ({255 - i}, 50))" for i in range(250)) + ")\n"
    progs["long_segments"] = "".join(
        f"segment((-1e6, {i}), (1e6, {-i}))\n" for i in range(255))
    progs["polygon_many_vertices"] = "g = polygon(" + ", ".join(
        f"({(i * 37) % 101}, {(i * 59) % 103})" for i in range(240)) + ")\n"
    progs["labels_everywhere"] = "".join(f'label(({i % 16}, {i // 16}), "ABCDEFGHIJKLMNOP")\n' for i in range(255))
    progs["intersect_storm"] = "".join(
        f"I{i} = intersect(circle(({i % 7 + 1}, 0), 5), circle((0, {i % 5}), 6))\n" for i in range(255))
    progs["roots_storm"] = "".join(f"f{i} = plot(sin({i}*x), -100, 100)\nr{i} = roots(f{i})\n" for i in range(1, 128))
    return progs


def main():
    rng = random.Random(20261014)
    det = ROOT / "determinism"
    det.mkdir(parents=True, exist_ok=True)
    for i in range(200):
        (det / f"p{i:03d}.figs").write_text(determinism_program(rng, i))
    adv = ROOT / "adversarial"
    adv.mkdir(parents=True, exist_ok=True)
    for name, src in adversarial_programs().items():
        (adv / f"{name}.figs").write_text(src)


if __name__ == "__main__":
    main()
