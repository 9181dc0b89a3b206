"""``secrecylab`` command line: run one experiment and write its CSV."""

from __future__ import annotations

import argparse
import configparser
import re
import sys

from . import __version__
from .errors import DomainError, ParameterError
from .experiments import DEFAULTS, EXPERIMENTS, ExperimentSpec, run_experiment

_DB = re.compile(r"\s*db\s*$", re.IGNORECASE)

# option name -> value type; every option takes a list
_KINDS = {
    "n": int,
    "p_db": float,
    "eps": float,
    "rs": float,
    "delta": float,
    "phi": float,
    "h2": float,
    "trials": int,
    "workers": int,
    "scheme": str,
}


def _number(text, kind, field):
    if field == "p_db":
        text = _DB.sub("", text)
    try:
        value = float(text)
    except ValueError:
        raise ParameterError(field, f"cannot parse {text!r} as a number") from None
    if kind is int:
        if value != int(value):
            raise ParameterError(field, f"{text!r} is not an integer")
        return int(value)
    return value


def parse_list(text: str, field: str):
    """``a,b,c`` or inclusive ``start:stop:step`` (or a mix, comma separated)."""
    kind = _KINDS[field]
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            raise ParameterError(field, f"empty item in {text!r}")
        if kind is str:
            out.append(part.lower())
            continue
        if ":" in part:
            bits = part.split(":")
            if len(bits) != 3:
                raise ParameterError(field, f"range {part!r} must be start:stop:step")
            start, stop, step = (_number(b, float, field) for b in bits)
            if step <= 0 or stop < start:
                raise ParameterError(field, f"range {part!r} needs step > 0 and stop >= start")
            count = int(round((stop - start) / step))
            if abs(start + count * step - stop) > 1e-9 * max(1.0, abs(stop)):
                raise ParameterError(field, f"range {part!r} does not land on stop")
            values = [round(start + k * step, 12) for k in range(count + 1)]
            if kind is int:
                values = [_number(repr(v), int, field) for v in values]
            out.extend(values)
        else:
            out.append(_number(part, kind, field))
    return out


def build_parser():
    parser = argparse.ArgumentParser(
        prog="secrecylab",
        description="Secure on-off transmission with artificial noise: designs, sweeps and simulations as CSV.",
    )
    parser.add_argument("experiment_id", choices=EXPERIMENTS)
    parser.add_argument("--config", help="INI file; [DEFAULT] plus one section per experiment")
    parser.add_argument("--n", help="antenna counts")
    parser.add_argument("--p-db", dest="p_db", help="total power in dB (a trailing 'dB' is allowed)")
    parser.add_argument("--eps", help="secrecy outage budgets in (0, 1]")
    parser.add_argument("--rs", help="message rates (bits/channel use)")
    parser.add_argument("--delta", help="transmit probability targets (fig2_pmin)")
    parser.add_argument("--phi", help="power split for validate")
    parser.add_argument("--h2", help="effective channel gains for design_ae")
    parser.add_argument("--scheme", help="nae and/or ae (campaign)")
    parser.add_argument("--trials", help="Monte Carlo trials (campaign, validate)")
    parser.add_argument("--workers", help="worker streams for campaign; capped by SECRECYLAB_THREADS")
    parser.add_argument("--seed", help="64-bit RNG seed (default 0)")
    parser.add_argument("--out", default=None, help="output CSV path, '-' for stdout (default)")
    parser.add_argument("--no-timestamp", action="store_true", help="leave the timestamp out of the meta line")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def _read_config(path, experiment_id):
    cfg = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        cfg.read_file(fh)
    if cfg.has_section(experiment_id):
        return dict(cfg.items(experiment_id))
    return dict(cfg.defaults())


def resolve(args) -> ExperimentSpec:
    """Merge config file and flags (flags win) into a validated spec."""
    raw = {}
    if args.config:
        raw.update({k.replace("-", "_"): v for k, v in _read_config(args.config, args.experiment_id).items()})
    for key in list(_KINDS) + ["seed", "out"]:
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value

    applicable = DEFAULTS[args.experiment_id]
    params = {}
    for key, text in raw.items():
        if key in ("seed", "out", "timestamp"):
            continue
        if key not in _KINDS:
            raise ParameterError(key, "unknown parameter")
        if key not in applicable:
            print(f"secrecylab: ignoring {key} (not used by {args.experiment_id})", file=sys.stderr)
            continue
        params[key] = parse_list(text, key)

    seed = 0
    if "seed" in raw:
        try:
            seed = int(str(raw["seed"]).strip())
        except ValueError:
            raise ParameterError("seed", f"{raw['seed']!r} is not an integer") from None
    return ExperimentSpec(
        args.experiment_id,
        params,
        output_path=raw.get("out", "-"),
        seed=seed,
        timestamp=not args.no_timestamp,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = resolve(args)
        return run_experiment(spec)
    except ParameterError as exc:
        print(f"secrecylab: invalid parameter {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"secrecylab: invalid parameter: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"secrecylab: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
