"""Staged Fig-3-domain pipeline with checkpoints (development driver)."""
import math
import os
import pickle
import sys
import time
import logging

import numpy as np

sys.path.insert(0, "src")
logging.basicConfig(level=logging.INFO, format="%(message)s")

from patterncont import amplitude as am, pde_systems as ps
from patterncont.continuation import (
    Continuation, ContinuationSettings, mode_amplitudes)

CKPT = "/tmp/fig3_ckpt.pkl"

co = am.Coefficients(c1=0.3, c2=-2, c3=-1, c4=5, c5=-2, eps=0.5)
grid = ps.Grid(lx=16 * math.pi, ly=2 * math.pi / math.sqrt(3), nx=128, ny=12)
sys_ = ps.SwiftHohenberg(co)

state = {}
if os.path.exists(CKPT):
    with open(CKPT, "rb") as fh:
        state = pickle.load(fh)
    print("loaded checkpoint with keys:", sorted(state))


def save():
    with open(CKPT, "wb") as fh:
        pickle.dump(state, fh)


def stage(name):
    def deco(fn):
        def run():
            if name in state:
                print(f"[{name}] cached")
                return
            t0 = time.time()
            fn()
            save()
            print(f"[{name}] done in {time.time()-t0:.0f}s")
        return run
    return deco


@stage("stripe")
def stage_stripe():
    s = max(am.scalar_equilibria(am.EquilibriumClass.STRIPE, co, 5),
            key=lambda e: e.re1).re1
    sett = ContinuationSettings(ds0=0.01, ds_max=0.03, max_steps=60,
                                param_min=0.05, param_max=0.8, n_eigs=24)
    cont = Continuation(sys_, grid, sett)
    sp = cont.newton_correct(
        am.ansatz_field(am.AmplitudeVector.from_real(-s, 0, 0), co, grid), 0.3)
    sbr = cont.continue_branch(sp, direction=-1)
    sbr = cont.detect_events(sbr)
    bps = sbr.tagged("branch-point")
    print("stripe BPs:", [(i, round(sbr.points[i].param, 6)) for i in bps])
    state["stripe"] = sbr
    state["stripe_sett"] = sett


@stage("bean")
def stage_bean():
    sbr = state["stripe"]
    bps = sbr.tagged("branch-point")
    sett = ContinuationSettings(ds0=0.01, ds_max=0.03, max_steps=60,
                                param_min=0.05, param_max=0.8, n_eigs=24)
    cont = Continuation(sys_, grid, sett)
    bean0 = cont.branch_switch(sbr, bps[0])
    sett2 = ContinuationSettings(ds0=0.005, ds_max=0.02, max_steps=120,
                                 param_min=-0.4, param_max=0.75, n_eigs=24)
    cont2 = Continuation(sys_, grid, sett2)
    bbr = cont2.continue_branch(bean0, direction=-1)
    print("bean c1 range:", bbr.params().min(), bbr.params().max())
    print("  (c1,n_unst):", [(round(p.param, 4), p.n_unstable)
                             for p in bbr.points][::8])
    state["bean_raw"] = bbr


@stage("bean_events")
def stage_bean_events():
    bbr = state["bean_raw"]
    sett2 = ContinuationSettings(ds0=0.005, ds_max=0.02, max_steps=120,
                                 param_min=-0.4, param_max=0.75, n_eigs=24)
    cont2 = Continuation(sys_, grid, sett2)
    bbr = cont2.detect_events(bbr)
    bps = bbr.tagged("branch-point")
    print("bean BPs:", [(i, round(bbr.points[i].param, 6),
                         bbr.points[i].n_unstable) for i in bps])
    state["bean"] = bbr





@stage("snake_seed")
def stage_snake_seed():
    bbr = state["bean_raw"].segment(0, 9)   # bean segment near the stripe
    sett = ContinuationSettings(ds0=0.005, ds_max=0.02, max_steps=120,
                                param_min=-0.4, param_max=0.75, n_eigs=24)
    cont = Continuation(sys_, grid, sett)
    ev = cont.detect_events(bbr)
    bps = ev.tagged("branch-point")
    print("bean-segment BPs:", [(i, round(ev.points[i].param, 6),
                                 ev.points[i].n_unstable) for i in bps])
    state["bean_events"] = ev
    seed = cont.branch_switch(ev, bps[0])
    state["snake_seed"] = seed


@stage("snake_run")
def stage_snake_run():
    seed = state["snake_seed"]
    sett = ContinuationSettings(ds0=0.004, ds_max=0.009, max_steps=700,
                                param_min=-0.45, param_max=0.70, n_eigs=24)
    cont = Continuation(sys_, grid, sett)
    out = {}
    for direction in (+1, -1):
        t0 = time.time()
        br = cont.continue_branch(seed, direction)
        lam = br.params()
        dl = np.diff(lam)
        revs = np.flatnonzero(dl[:-1] * dl[1:] < 0)
        print(f"dir={direction:+d}: {len(br)} pts ({time.time()-t0:.0f}s), "
              f"c1 in [{lam.min():.4f},{lam.max():.4f}], revs={len(revs)}")
        print("   rev params:", [round(lam[i+1], 4) for i in revs[:40]])
        out[direction] = br
        state["snake_runs"] = out
        save()


STAGES = {"stripe": stage_stripe, "bean": stage_bean,
          "bean_events": stage_bean_events,
          "snake_seed": stage_snake_seed, "snake_run": stage_snake_run}

if __name__ == "__main__":
    for w in (sys.argv[1:] or list(STAGES)):
        STAGES[w]()
