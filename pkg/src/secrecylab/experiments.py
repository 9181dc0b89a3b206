"""Parameter sweeps and figure reproductions written as CSV.

Every experiment is a grid over its parameter lists, evaluated in grid
order. Output is one ``# meta:`` comment line, a header row and one row per
grid point; floats carry 9 significant digits.
"""

from __future__ import annotations

import datetime
import itertools
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, ae, nae, sim
from .errors import DomainError, ParameterError
from .secrecy import SecrecyBudget, SystemConfig

EXPERIMENTS = (
    "fig1_tradeoff",
    "fig2_pmin",
    "fig3_thr_vs_rs",
    "fig4_nae_thr_vs_p",
    "fig5_ae_thr_vs_p",
    "fig6_gain_vs_eps",
    "design_nae",
    "design_ae",
    "campaign",
    "validate",
)


def _span(start, stop, step):
    count = int(round((stop - start) / step))
    return [round(start + k * step, 12) for k in range(count + 1)]


# default grids for each experiment
DEFAULTS = {
    "fig1_tradeoff": {"n": [2, 4, 8], "p_db": [10.0], "rs": [2.0],
                      "eps": [10.0 ** e for e in _span(-4.0, 0.0, 0.1)]},
    "fig2_pmin": {"n": [2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64], "eps": [0.01], "rs": [2.0],
                  "delta": [0.5, 0.9, 0.99]},
    "fig3_thr_vs_rs": {"n": [2, 4, 8], "p_db": [20.0], "eps": [0.01], "rs": _span(0.1, 10.0, 0.1)},
    "fig4_nae_thr_vs_p": {"p_db": _span(0.0, 50.0, 5.0), "eps": [1.0, 0.1, 0.01], "n": [4]},
    "fig5_ae_thr_vs_p": {"p_db": _span(0.0, 50.0, 5.0), "eps": [1.0, 0.1, 0.01], "n": [4]},
    "fig6_gain_vs_eps": {"p_db": [40.0], "n": [2, 4, 8],
                         "eps": [10.0 ** e for e in _span(-4.0, -1.0, 0.25)]},
    "design_nae": {"rs": [2.0], "eps": [0.01], "n": [4], "p_db": [20.0]},
    "design_ae": {"h2": [1.0], "eps": [0.01], "n": [4], "p_db": [20.0]},
    "campaign": {"scheme": ["nae"], "eps": [0.01], "n": [4], "p_db": [20.0], "rs": [2.0],
                 "trials": [100_000], "workers": [1]},
    "validate": {"phi": [0.3], "n": [4], "trials": [1_000_000]},
}


@dataclass
class ExperimentSpec:
    experiment_id: str
    params: dict = field(default_factory=dict)
    output_path: str = "-"
    seed: int = 0
    timestamp: bool = True

    def __post_init__(self):
        if self.experiment_id not in EXPERIMENTS:
            raise ParameterError("experiment_id", f"unknown experiment {self.experiment_id!r}")
        merged = {k: list(v) for k, v in DEFAULTS[self.experiment_id].items()}
        for key, values in self.params.items():
            values = list(values)
            if not values:
                raise ParameterError(key, "empty parameter list")
            merged[key] = values
        self.params = merged
        _validate(self.params)
        if not 0 <= self.seed < 2 ** 64:
            raise ParameterError("seed", "must be a 64-bit unsigned integer")


def _validate(params):
    def each(name, ok, what):
        for v in params.get(name, ()):
            if not ok(v):
                raise ParameterError(name, f"{v!r} {what}")

    each("n", lambda v: int(v) == v and v >= 2, "is not an integer >= 2")
    each("p_db", lambda v: math.isfinite(v), "is not finite")
    each("eps", lambda v: 0 < v <= 1, "is not in (0, 1]")
    each("rs", lambda v: v > 0, "is not > 0")
    each("delta", lambda v: 0 < v < 1, "is not in (0, 1)")
    each("phi", lambda v: 0 < v < 1, "is not in (0, 1)")
    each("h2", lambda v: v >= 0, "is negative")
    each("trials", lambda v: int(v) == v and v >= 1, "is not a positive integer")
    each("workers", lambda v: int(v) == v and v >= 1, "is not a positive integer")
    each("scheme", lambda v: v in ("nae", "ae"), "is not 'nae' or 'ae'")


def fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return format(float(value), ".9g")


def _grid(params, names):
    return itertools.product(*(params[name] for name in names))


def _maybe(fn, *args):
    # approximations outside their validity range are written as nan
    try:
        return fn(*args)
    except DomainError:
        return math.nan


def _fig1(p, seed):
    yield ("N", "P_dB", "R_s", "epsilon", "p_tx_max")
    for n, p_db, rs, eps in _grid(p, ("n", "p_db", "rs", "eps")):
        cfg = SystemConfig.from_db(n, p_db)
        design = nae.delay_optimal_design(rs, SecrecyBudget(eps, n), cfg)
        yield (n, p_db, rs, eps, design.p_tx)


def _fig2(p, seed):
    yield ("N", "epsilon", "R_s", "delta", "P_min", "P_min_dB")
    for n, eps, rs, delta in _grid(p, ("n", "eps", "rs", "delta")):
        pmin = nae.min_power(rs, SecrecyBudget(eps, n), delta)
        yield (n, eps, rs, delta, pmin, 10.0 * math.log10(pmin))


def _fig3(p, seed):
    yield ("N", "P_dB", "epsilon", "R_s", "p_tx_max", "eta")
    for n, p_db, eps, rs in _grid(p, ("n", "p_db", "eps", "rs")):
        d = nae.delay_optimal_design(rs, SecrecyBudget(eps, n), SystemConfig.from_db(n, p_db))
        yield (n, p_db, eps, rs, d.p_tx, d.throughput)


def _fig4(p, seed):
    yield ("P_dB", "epsilon", "N", "eta_exact", "eta_approx")
    for p_db, eps, n in _grid(p, ("p_db", "eps", "n")):
        cfg, budget = SystemConfig.from_db(n, p_db), SecrecyBudget(eps, n)
        exact = nae.optimal_message_rate(budget, cfg)[1].throughput
        approx = _maybe(lambda: nae.throughput_high_snr_approx(budget, cfg).eta)
        yield (p_db, eps, n, exact, approx)


def _fig5(p, seed):
    yield ("P_dB", "epsilon", "N", "eta_exact", "eta_approx_full", "eta_approx_simple")
    for p_db, eps, n in _grid(p, ("p_db", "eps", "n")):
        cfg, budget = SystemConfig.from_db(n, p_db), SecrecyBudget(eps, n)
        full = _maybe(ae.throughput_approx_full, budget, cfg)
        simple = _maybe(lambda: ae.throughput_approx_simple(budget, cfg).eta)
        yield (p_db, eps, n, ae.throughput_exact(budget, cfg), full, simple)


def _fig6(p, seed):
    yield ("P_dB", "N", "epsilon", "eta_ae", "eta_nae", "gain_exact", "gain_approx")
    for p_db, n, eps in _grid(p, ("p_db", "n", "eps")):
        cfg, budget = SystemConfig.from_db(n, p_db), SecrecyBudget(eps, n)
        eta_ae = ae.throughput_exact(budget, cfg)
        eta_nae = nae.optimal_message_rate(budget, cfg)[1].throughput
        yield (p_db, n, eps, eta_ae, eta_nae, eta_ae - eta_nae, _maybe(ae.throughput_gain_approx, cfg))


def _design_nae(p, seed):
    yield ("R_s", "epsilon", "N", "P_dB", "phi", "R_b", "R_e", "mu", "p_tx", "eta")
    for rs, eps, n, p_db in _grid(p, ("rs", "eps", "n", "p_db")):
        d = nae.delay_optimal_design(rs, SecrecyBudget(eps, n), SystemConfig.from_db(n, p_db))
        yield (rs, eps, n, p_db, d.phi, d.rates.rate_codeword, d.rates.rate_redundancy,
               d.threshold, d.p_tx, d.throughput)


def _design_ae(p, seed):
    yield ("h2", "epsilon", "N", "P_dB", "transmitting", "phi", "R_b", "R_s", "R_e")
    for h2, eps, n, p_db in _grid(p, ("h2", "eps", "n", "p_db")):
        pt = ae.adapt_design(h2, SecrecyBudget(eps, n), SystemConfig.from_db(n, p_db))
        yield (h2, eps, n, p_db, pt.transmitting, pt.phi, pt.rates.rate_codeword,
               pt.rates.rate_message, pt.rates.rate_redundancy)


def _campaign(p, seed):
    yield ("scheme", "N", "P_dB", "epsilon", "R_s", "trials", "transmissions", "secrecy_outages",
           "decode_failures", "p_tx", "p_tx_ci", "p_so", "p_so_ci", "throughput", "throughput_ci")
    names = ("scheme", "n", "p_db", "eps", "rs", "trials", "workers")
    for scheme, n, p_db, eps, rs, trials, workers in _grid(p, names):
        cfg = SystemConfig.from_db(n, p_db, rng_seed=seed)
        budget = SecrecyBudget(eps, n)
        if scheme == "nae":
            plan = nae.delay_optimal_design(rs, budget, cfg)
        else:
            plan, rs = budget, math.nan
        rep = sim.simulate_campaign(sim.CampaignSpec(plan, int(trials), cfg, int(workers)))
        yield (scheme, n, p_db, eps, rs, int(trials), rep.transmissions, rep.secrecy_outages,
               rep.decode_failures, *rep.empirical_p_tx, *rep.empirical_p_so,
               *rep.empirical_throughput)


def _validate_exp(p, seed):
    yield ("phi", "N", "samples", "seed", "max_deviation", "max_deviation_exponential_limit")
    for phi, n, trials in _grid(p, ("phi", "n", "trials")):
        exact, limit = sim.ccdf_deviations(phi, n, int(trials), seed)
        yield (phi, n, int(trials), seed, exact, limit)


_RUNNERS = {
    "fig1_tradeoff": _fig1,
    "fig2_pmin": _fig2,
    "fig3_thr_vs_rs": _fig3,
    "fig4_nae_thr_vs_p": _fig4,
    "fig5_ae_thr_vs_p": _fig5,
    "fig6_gain_vs_eps": _fig6,
    "design_nae": _design_nae,
    "design_ae": _design_ae,
    "campaign": _campaign,
    "validate": _validate_exp,
}


def rows(spec: ExperimentSpec):
    """Header followed by data rows, as raw Python values."""
    return list(_RUNNERS[spec.experiment_id](spec.params, spec.seed))


def meta_line(spec: ExperimentSpec):
    echo = json.dumps({"experiment": spec.experiment_id, "params": spec.params}, sort_keys=True)
    line = f"# meta: secrecylab={__version__} seed={spec.seed} spec={echo}"
    if spec.timestamp:
        stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        line += f" timestamp={stamp}"
    return line


def render(spec: ExperimentSpec) -> str:
    table = rows(spec)
    lines = [meta_line(spec), ",".join(table[0])]
    lines += [",".join(fmt(v) for v in row) for row in table[1:]]
    return "\n".join(lines) + "\n"


def run_experiment(spec: ExperimentSpec) -> int:
    """Evaluate the experiment and write its CSV; ``-`` means stdout."""
    text = render(spec)
    if spec.output_path == "-":
        sys.stdout.write(text)
    else:
        Path(spec.output_path).write_text(text, newline="\n")
    return 0

