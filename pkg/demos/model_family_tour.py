"""
Walk through the one-parameter model family on C^1.

For a few values of lambda this prints gamma, the closed-form verdict, the
verdict of the general pipeline, and the growth of log ||Top(e^Q) k_w||
along a ray. Run with ``python3 demos/model_family_tour.py``.
"""
import numpy as np

from bargmann_toeplitz import analyze
from bargmann_toeplitz.family import classify_example, gamma, model_problem
from bargmann_toeplitz.oracle import unboundedness_scan

CASES = [
    ("inside the disc", -0.5, 1.0, 2.0),
    ("inside, complex lambda", -0.3 + 0.6j, 0.5j, 1.0),
    ("on the circle, c = gamma d", (1 - np.exp(0.8j)) / 2, None, 0.7 - 0.2j),
    ("on the circle, c != gamma d", (1 - np.exp(0.8j)) / 2, 1.0, 0.7 - 0.2j),
    ("outside, |gamma| = 1.5", (1 - 1 / 1.5) / 2, 0.3, 0.1),
]


def main():
    print(f"{'case':32s} {'|gamma|':>8s} {'closed form':>12s} {'pipeline':>16s} {'slope':>9s} {'linear':>9s}")
    for name, lam, c, d in CASES:
        if c is None:
            c = gamma(lam) * d
        cls = classify_example(lam, c, d)
        v = analyze(*model_problem(lam, c, d))
        scan = unboundedness_scan(lam, c, d, radii=np.linspace(2, 20, 10))
        print(
            f"{name:32s} {cls.abs_gamma:8.4f} {cls.verdict.value:>12s} {v.conclusion.value:>16s}"
            f" {scan.slope:9.4f} {scan.linear:9.4f}"
        )
    print()
    print("slope is the |w|^2 coefficient, (|gamma|^2 - 1)/4; on the circle it is")
    print("zero and a nonzero linear term alone makes the norms blow up.")


if __name__ == "__main__":
    main()
