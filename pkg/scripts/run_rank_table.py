#!/usr/bin/env python3
"""Print computed vs claimed final ranks for every catalogued scenario."""

from conclab.experiments import rank_table, rank_table_csv


def main():
    rows = rank_table()
    print(rank_table_csv(rows), end="")
    mismatches = [r for r in rows if not r.match]
    print(f"# {len(rows) - len(mismatches)}/{len(rows)} scenarios match")


if __name__ == "__main__":
    main()
