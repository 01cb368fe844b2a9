"""Randomized reproduction of the verification-cost table.

For each property the report runs seeded constructions on random directions
and records whether every trial succeeded, next to the minimal outcome count
(``D^2`` when informational completeness is forced, ``D^2 - D + 1`` for the
CQ question).
"""

from __future__ import annotations

import time

import numpy as np

from . import detect, povm, states, witness

__all__ = ["trial_seed", "run_report", "format_report"]

ROWS = ("NPT", "ENTANGLED", "DISCORDANT", "NON-CLASSICAL")


def trial_seed(seed: int, trial: int) -> int:
    """Independent 64-bit sub-seed for trial ``trial`` of a run seeded with ``seed``."""
    return int(np.random.SeedSequence([seed, trial]).generate_state(1, np.uint64)[0])


def _random_traceless(d: int, rng) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = (g + g.conj().T) / 2
    return h - np.trace(h).real / d * np.eye(d)


def _run_trial(d: int, sub: int) -> dict:
    rng = states.make_rng(sub)
    delta = states.random_direction(d, rng)
    rec = {"subseed": sub}

    try:
        cert = witness.build_entangling_perturbation(delta)
        base_ppt = detect.ppt_check(cert.base)[0]
        rec["npt"] = bool(cert.verify())
        rec["entangled"] = bool(rec["npt"] and base_ppt)
        rec["min_pt_eig"] = float(cert.min_pt_eig)
        rec["lambda_npt"] = float(cert.lam)
    except witness.WitnessConstructionError as exc:
        rec.update(npt=False, entangled=False, error_npt=str(exc))

    cq_state = states.sample_cq(d, rng)
    _, _, invariant = witness.cq_invariance_check(cq_state, _random_traceless(d, rng))
    try:
        crossing = witness.build_noncq_perturbation(delta)
        crossed = crossing.verify()
    except witness.WitnessConstructionError as exc:
        crossed = False
        rec["error_noncq"] = str(exc)
    rec["discordant_invariance"] = bool(invariant)
    rec["discordant_crossing"] = bool(crossed)

    try:
        rec["nonclassical"] = bool(witness.build_noncc_perturbation(delta).verify())
    except witness.WitnessConstructionError as exc:
        rec.update(nonclassical=False, error_noncc=str(exc))
    return rec


def run_report(d: int, trials: int, seed: int) -> dict:
    """Run ``trials`` seeded trials at local dimension ``d``; returns a JSON-ready dict."""
    if trials < 0:
        raise ValueError("trials must be non-negative")
    start = time.perf_counter()
    D = d * d
    records = [dict(trial=t, **_run_trial(d, trial_seed(seed, t))) for t in range(trials)]

    cq_povm = povm.build_minimal_cq_povm(d)
    analysis = povm.analyze(cq_povm)

    def count(key):
        return sum(bool(r[key]) for r in records)

    rows = [
        {"property": "NPT", "informationally_complete": True, "minimal_outcomes": D**2,
         "successes": count("npt"), "check": "NPT crossing from boundary isotropic state"},
        {"property": "ENTANGLED", "informationally_complete": True, "minimal_outcomes": D**2,
         "successes": count("entangled"), "check": "separable base, NPT perturbation"},
        {"property": "DISCORDANT", "informationally_complete": False, "minimal_outcomes": len(cq_povm),
         "successes": sum(r["discordant_invariance"] and r["discordant_crossing"] for r in records),
         "check": "I(x)Xi keeps CQ; other directions exit CQ",
         "povm_decides_cq": analysis.decides_cq, "povm_dim_xe": analysis.dim_xe},
        {"property": "NON-CLASSICAL", "informationally_complete": True, "minimal_outcomes": D**2,
         "successes": count("nonclassical"), "check": "CC base, non-CC perturbation"},
    ]
    for row in rows:
        row["trials"] = trials
        row["passed"] = row["successes"] == trials
    return {
        "d": d,
        "D": D,
        "seed": seed,
        "trials": trials,
        "rows": rows,
        "records": records,
        "all_passed": all(r["passed"] for r in rows),
        "wall_clock_s": time.perf_counter() - start,
    }


def format_report(report: dict) -> str:
    head = f"{'property':<15}{'IC required':>12}{'min outcomes':>14}{'demonstrated':>15}"
    lines = [f"d={report['d']}  D={report['D']}  seed={report['seed']}  trials={report['trials']}", head, "-" * len(head)]
    if report["trials"] == 0:
        return "\n".join(lines[:2]) + "\n"
    for row in report["rows"]:
        ic = "yes" if row["informationally_complete"] else "no"
        shown = f"{row['successes']}/{row['trials']}"
        lines.append(f"{row['property']:<15}{ic:>12}{row['minimal_outcomes']:>14}{shown:>15}")
    lines.append("-" * len(head))
    lines.append("verdict: " + ("PASS" if report["all_passed"] else "FAIL"))
    return "\n".join(lines) + "\n"
