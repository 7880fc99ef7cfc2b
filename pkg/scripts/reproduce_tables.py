#!/usr/bin/env python3
"""Reproduce the headline tables: half-integer stopping times, the d=3
census, successor-ratio records, the 4/3 multiplication table, and the
exact stopping-time distribution for d=3."""

from __future__ import annotations

import argparse
from fractions import Fraction

from ceildyn.chains import chain_stop_mass, squaring_census
from ceildyn.multmaps import stopping_time_mult
from ceildyn.squaring import theta_denominator2
from ceildyn.window import stopping_time_windowed


def table_half() -> None:
    print("# starts (2l+1)/2, closed form")
    print("l theta reached")
    for l in range(1, 10):
        theta, reached = theta_denominator2(l)
        print(l, theta, reached)


def table_third() -> None:
    print("# starts l/3, exact stopping times")
    print("l theta")
    report = squaring_census(3, 11, window=25, lo=3)
    for l in range(3, 12):
        print(l, report.thetas[l])


def table_succ(bound: int) -> None:
    print(f"# records of theta((d+1)/d), d <= {bound}")
    print("d theta")
    best = -1
    for d in range(1, bound + 1):
        if d == 1:
            theta = 0
        else:
            theta = stopping_time_windowed(d + 1, d, 64, auto_grow=True).theta
        if theta is not None and theta > best:
            print(d, theta)
            best = theta


def table_mult(bound: int) -> None:
    r = Fraction(4, 3)
    print("# theta_{4/3}(n), n = 0..12")
    print("n theta reached")
    for n in range(13):
        rep = stopping_time_mult(r, n)
        print(n, rep.theta, rep.reached)
    print(f"# records of theta_{{4/3}}(n), n <= {bound}")
    print("n theta")
    best = -1
    for n in range(bound + 1):
        rep = stopping_time_mult(r, n)
        if rep.theta is not None and rep.theta > best:
            print(n, rep.theta)
            best = rep.theta


def table_dist(depth: int) -> None:
    print(f"# exact stopping-time masses for d=3, j = 0..{depth}")
    print("j mass")
    for j in range(depth + 1):
        print(j, chain_stop_mass(3, j))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--table",
        choices=("half", "third", "succ", "mult", "dist", "all"),
        default="all",
    )
    parser.add_argument("--succ-bound", type=int, default=199)
    parser.add_argument("--mult-bound", type=int, default=3500)
    parser.add_argument("--dist-depth", type=int, default=6)
    args = parser.parse_args()
    wanted = args.table
    if wanted in ("half", "all"):
        table_half()
    if wanted in ("third", "all"):
        table_third()
    if wanted in ("succ", "all"):
        table_succ(args.succ_bound)
    if wanted in ("mult", "all"):
        table_mult(args.mult_bound)
    if wanted in ("dist", "all"):
        table_dist(args.dist_depth)


if __name__ == "__main__":
    main()
