"""Plot a `qlp gap` CSV: python scripts/plot_gap.py gap.csv [out.png]"""
import csv
import sys

import matplotlib.pyplot as plt


def main():
    path = sys.argv[1]
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [(float(a), float(b)) for a, b in reader]
    lam, f = zip(*rows)
    plt.plot(lam, f)
    plt.axhline(0.0, color="grey", linewidth=0.5)
    plt.xlabel("λ")
    plt.ylabel(header[1])
    if len(sys.argv) > 2:
        plt.savefig(sys.argv[2], dpi=150)
    else:
        plt.show()


if __name__ == "__main__":
    main()
