"""Size-adjusted power of the independence test against growing coupling.

Power is computed against the empirical null critical value (not the
asymptotic 1.6449), so finite-sample size distortion cannot flatter the
comparison.  The full statistic uses every Fourier frequency; the block
variant thins the grid to independent ordinates and pays for it in power.
"""

import argparse

from spectest import (
    IndependenceModel,
    McConfig,
    StatisticVariant,
    benchmark_process,
    size_adjusted_power,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=201)
    parser.add_argument("--m", type=int, default=30)
    parser.add_argument("--reps", type=int, default=400)
    parser.add_argument("--seed", type=int, default=17)
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()

    variants = (
        StatisticVariant(form="full"),
        StatisticVariant(form="quadratic"),
        StatisticVariant(form="block"),
    )

    def config(phi, seed):
        return McConfig(
            process=benchmark_process(phi),
            n=args.n,
            bandwidth=args.m,
            model=IndependenceModel(),
            variants=variants,
            replications=args.reps,
            seed=seed,
        )

    null_config = config(0.0, args.seed)
    print(f"n = {args.n}, m = {args.m}, {args.reps} replications per point\n")
    print(f"{'phi':>5s}  {'full':>6s}  {'quadratic':>9s}  {'block':>6s}")
    for k, phi in enumerate((0.05, 0.1, 0.2, 0.3)):
        powers = size_adjusted_power(
            null_config, config(phi, args.seed + k + 1), threads=args.threads
        )
        print(
            f"{phi:5.2f}  {powers['full-kl']:6.3f}  {powers['quadratic']:9.3f}  "
            f"{powers['block-kl']:6.3f}"
        )
    print("\npower rises with coupling; full and quadratic track each other,")
    print("the block variant trails because it discards most of the grid.")


if __name__ == "__main__":
    main()
