"""Scratch: measure the three trend criteria before freezing tests."""
import time

import numpy as np

import fairenc as fe
from fairenc.sweep import DEFAULT_SIGMA_GRID

SEEDS = tuple(range(20))


def crit7():
    t0 = time.time()
    cfg = fe.SweepConfig(scenario="irreducible", sigma_grid=DEFAULT_SIGMA_GRID,
                         m_grid=(), models=("logistic",), seeds=SEEDS)
    recs = fe.run_sweep(cfg)
    by_sigma = {}
    per_seed = {}
    for r in recs:
        by_sigma.setdefault(r.reg_param, []).append(r)
        per_seed.setdefault(r.seed, {})[r.reg_param] = r
    sigmas = sorted(by_sigma)
    mean_auc = [np.mean([r.auc_global for r in by_sigma[s]]) for s in sigmas]
    mean_abs_eof = [np.mean([abs(r.eof) for r in by_sigma[s] if r.eof is not None]) for s in sigmas]
    print(f"crit7 ({time.time()-t0:.0f}s):")
    for s, a, e in zip(sigmas, mean_auc, mean_abs_eof):
        print(f"  sigma={s:4} meanAUC={a:.4f} mean|EOF|={e:.4f}")
    viol_mean = sum(1 for i in range(len(sigmas) - 1) if mean_auc[i + 1] > mean_auc[i])
    print("  mean-curve adjacent increases:", viol_mean)
    per_seed_viol = []
    for seed, row in per_seed.items():
        aucs = [row[s].auc_global for s in sigmas]
        per_seed_viol.append(sum(1 for i in range(len(sigmas) - 1) if aucs[i + 1] > aucs[i]))
    print("  per-seed violation counts:", sorted(per_seed_viol))
    ratio = mean_abs_eof[-1] / mean_abs_eof[0]
    print(f"  |EOF| ratio sigma=1 vs 0: {ratio:.3f} (need <= 0.25)")


def crit6():
    t0 = time.time()
    cfg = fe.SweepConfig(scenario="reducible", m_grid=(0.0, 1000.0), sigma_grid=(),
                         models=("logistic",), seeds=SEEDS)
    recs = fe.run_sweep(cfg)
    at = {0.0: [], 1000.0: []}
    for r in recs:
        at[r.reg_param].append(r)
    e0 = np.mean([abs(r.eof) for r in at[0.0]])
    e1 = np.mean([abs(r.eof) for r in at[1000.0]])
    a0 = np.mean([r.auc_global for r in at[0.0]])
    a1 = np.mean([r.auc_global for r in at[1000.0]])
    print(f"crit6 ({time.time()-t0:.0f}s): |EOF| m0={e0:.4f} m1000={e1:.4f} ratio={e0/max(e1,1e-12):.2f} (need >= 1.3)")
    print(f"  AUC m0={a0:.4f} m1000={a1:.4f} |diff|={abs(a0-a1):.4f} (need < 0.01)")


def crit8():
    t0 = time.time()
    inter = fe.run_sweep(fe.SweepConfig(
        scenario="intersectional", m_grid=(0.0,), sigma_grid=(),
        models=("logistic",), seeds=SEEDS))
    marg = fe.run_sweep(fe.SweepConfig(
        scenario="intersectional", protected="origin", reference="o1", protected_group="o0",
        m_grid=(0.0,), sigma_grid=(), models=("logistic",), seeds=SEEDS))
    ei = np.mean([abs(r.eof) for r in inter if r.eof is not None])
    em = np.mean([abs(r.eof) for r in marg if r.eof is not None])
    ai = np.mean([r.auc_global for r in inter])
    am = np.mean([r.auc_global for r in marg])
    print(f"crit8 ({time.time()-t0:.0f}s): |EOF| inter={ei:.4f} marginal={em:.4f} (need inter > marg)")
    print(f"  AUC inter={ai:.4f} marginal={am:.4f} diff={ai-am:+.4f} (need >= -0.005)")
    ne_i = sum(1 for r in inter if r.eof is None)
    ne_m = sum(1 for r in marg if r.eof is None)
    print(f"  records missing EOF: inter={ne_i} marg={ne_m}")


if __name__ == "__main__":
    crit6()
    crit8()
    crit7()
