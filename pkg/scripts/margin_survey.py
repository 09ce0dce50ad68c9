"""Survey of the l1-l2 Loewner margin and of ||c_x|| over a (k, n) grid.

For each cell prints quantiles of lambda_min(sqrt(n) G^(1/2) - S) relative
to ||G^(1/2)||, and of ||c_x||.  Ginibre entries are far from constant
modulus, so ||c_x|| concentrates well away from 0 as n grows.

    python scripts/margin_survey.py --trials 200 --k 1,2,4 --n 2,4,16
"""
import argparse
from dataclasses import dataclass

import numpy as np

from cstar_sharp import verify_thm22
from cstar_sharp.ensembles import make_rng, random_module_vector
from cstar_sharp.algebra import loewner_margin, norm_cstar, sqrtm_psd
from cstar_sharp.module_space import ell1_side, ell2_side, gram


@dataclass(frozen=True)
class SurveyConfig:
    k_list: tuple = (1, 2, 4, 8)
    n_list: tuple = (2, 4, 8, 16)
    trials: int = 200
    seed: int = 0


def survey_cell(cfg, k, n):
    margins, cx = [], []
    for t in range(cfg.trials):
        x = random_module_vector(make_rng(cfg.seed, k, n, t), n, k)
        scale = norm_cstar(sqrtm_psd(gram(x)))
        margins.append(loewner_margin(ell1_side(x), ell2_side(x)) / scale)
        cx.append(verify_thm22(x).c_x_norm)
    return np.array(margins), np.array(cx)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", default="1,2,4,8")
    ap.add_argument("--n", default="2,4,8,16")
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    cfg = SurveyConfig(
        k_list=tuple(int(v) for v in args.k.split(",")),
        n_list=tuple(int(v) for v in args.n.split(",")),
        trials=args.trials,
        seed=args.seed,
    )
    print(f"{'k':>3} {'n':>4} {'margin q05':>11} {'margin med':>11} {'||c_x|| min':>12} {'||c_x|| med':>12} {'||c_x|| max':>12}")
    for k in cfg.k_list:
        for n in cfg.n_list:
            m, c = survey_cell(cfg, k, n)
            print(f"{k:>3} {n:>4} {np.quantile(m, 0.05):>11.4f} {np.median(m):>11.4f} "
                  f"{c.min():>12.4f} {np.median(c):>12.4f} {c.max():>12.4f}")


if __name__ == "__main__":
    main()
