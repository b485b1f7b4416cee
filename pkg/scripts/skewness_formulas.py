"""Third central moment of shifted triangulars: quadrature, the shipped closed form and the (c+a+2b) variant.

The quadrature and shipped values are invariant under a shift; the variant is not.

    python3 scripts/skewness_formulas.py
"""

import sys

from portkit.cli import render_table
from portkit.moments import printed_triangular_skewness, skewness, triangular_skewness
from portkit.fuzzy import make_triangular


def main():
    a, b, c = -0.2, 0.0, 0.5
    rows = []
    for shift in (0.0, 0.5, 1.0, 2.0, -1.0):
        abc = (a + shift, b + shift, c + shift)
        rows.append([shift, skewness(make_triangular(*abc)), triangular_skewness(*abc), printed_triangular_skewness(*abc)])
    print(render_table(["shift", "quadrature", "closed form", "(c+a+2b) variant"], rows))
    return 0


if __name__ == "__main__":
    sys.exit(main())
