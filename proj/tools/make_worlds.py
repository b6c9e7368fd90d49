#!/usr/bin/env python3
"""Writes the bundled fixture worlds as GRID text maps.

Benchmark scenarios (data/worlds): 10 m x 10 m at 0.05 m per cell.
Extra fixtures (data/fixtures): small maps used by tests.
"""

import pathlib
import sys

RES = 0.05


class Canvas:
    def __init__(self, w, h, border=3):
        self.w, self.h = w, h
        self.cells = [["." for _ in range(w)] for _ in range(h)]
        if border:
            self.rect(0, 0, w, border)
            self.rect(0, h - border, w, border)
            self.rect(0, 0, border, h)
            self.rect(w - border, 0, border, h)

    def rect(self, x, y, w, h, ch="#"):
        for yy in range(max(0, y), min(self.h, y + h)):
            for xx in range(max(0, x), min(self.w, x + w)):
                self.cells[yy][xx] = ch

    def clear(self, x, y, w, h):
        self.rect(x, y, w, h, ".")

    def write(self, path):
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            f.write(f"GRID {self.w} {self.h} {RES}\n")
            for row in self.cells:
                f.write("".join(row) + "\n")


def s1_open():
    c = Canvas(200, 200)
    for r in [(40, 40, 30, 20), (120, 30, 25, 35), (60, 120, 20, 40), (130, 130, 35, 25), (95, 85, 15, 15)]:
        c.rect(*r)
    return c


def s2_passages():
    c = Canvas(200, 200)
    c.rect(66, 0, 4, 200)
    c.clear(66, 30, 4, 12)
    c.rect(133, 0, 4, 200)
    c.clear(133, 150, 4, 12)
    c.rect(0, 100, 66, 4)
    c.clear(20, 100, 12, 4)
    c.rect(137, 100, 63, 4)
    c.clear(165, 100, 12, 4)
    c.rect(70, 66, 63, 4)
    c.clear(95, 66, 12, 4)
    return c


def s3_bisected():
    c = Canvas(200, 200)
    c.rect(0, 98, 184, 5)
    for r in [(40, 40, 12, 12), (110, 45, 12, 12), (60, 150, 12, 12), (140, 140, 12, 12)]:
        c.rect(*r)
    return c


def s4_clutter():
    c = Canvas(200, 200)
    for j, y in enumerate(range(22, 180, 30)):
        for x in range(22 + (15 if j % 2 else 0), 180, 34):
            c.rect(x, y, 10, 10)
    c.rect(88, 10, 4, 40)
    c.rect(150, 96, 40, 4)
    return c


def empty_room():
    return Canvas(100, 100, border=2)


def disconnected():
    c = Canvas(200, 100)
    c.rect(98, 0, 4, 100)
    return c


def corridor():
    c = Canvas(100, 40, border=0)
    c.rect(0, 0, 100, 14)
    c.rect(0, 26, 100, 14)
    c.rect(0, 14, 2, 12)
    c.rect(98, 14, 2, 12)
    return c


def closet():
    c = Canvas(100, 100, border=2)
    # 20 x 20 closet whose only opening is a diagonal pinhole at its corner.
    c.rect(30, 2, 1, 28)
    c.rect(2, 30, 28, 1)
    return c


def main():
    root = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parent.parent / "data")
    for name, make in [("s1_open", s1_open), ("s2_passages", s2_passages), ("s3_bisected", s3_bisected),
                       ("s4_clutter", s4_clutter)]:
        make().write(root / "worlds" / f"{name}.grid")
    for name, make in [("empty_room", empty_room), ("disconnected", disconnected), ("corridor", corridor),
                       ("closet", closet)]:
        make().write(root / "fixtures" / f"{name}.grid")


if __name__ == "__main__":
    main()
