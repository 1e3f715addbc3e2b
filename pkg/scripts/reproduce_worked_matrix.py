#!/usr/bin/env python3
"""Rebuild the 4x4 two-stage sloped Haar matrix from twelve fixed slopes.

Feeds a published sequence of twelve slope values through the two-stage
(raw-normalization) construction and prints the composed matrix next to
the expected one, along with the worst entry deviation.
"""

import argparse

import numpy as np

from cthwave.wavelet import build_level_matrix

SLOPES = [
    1.469, -0.351, -0.075, 0.027, -0.070, 0.033,
    -0.028, 0.156, 0.674, 0.147, 0.570, 0.834,
]

EXPECTED = np.array(
    [
        [0.614, 0.780, 1.057, 1.044],
        [0.835, 1.061, -0.836, -0.826],
        [0.983, -0.992, 0.0, 0.0],
        [0.0, 0.0, 0.993, -0.962],
    ]
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.parse_args()

    lams = iter(SLOPES)
    h1 = build_level_matrix(4, lams, normalized=False).entries
    h2 = np.eye(4)
    h2[:2, :2] = build_level_matrix(2, lams, normalized=False).entries
    composed = h2 @ h1

    np.set_printoptions(precision=4, suppress=True)
    print("composed two-stage matrix:")
    print(composed)
    print("expected (3 decimal places):")
    print(EXPECTED)
    err = np.abs(composed - EXPECTED).max()
    print(f"max entry deviation: {err:.6f}")


if __name__ == "__main__":
    main()
