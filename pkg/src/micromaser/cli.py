"""Command-line driver.

    micromaser fig2 -o fig2.csv
    micromaser point --N 100 --gt 0.31416 --nth 0.01 --kappa-ratio 1e-6
    micromaser sweep-kappa --gt-list 0.314,1.571 --start 1e-6 --stop 1e-1 --count 11 --spacing log

Values come from built-in defaults, then the recipe of the command, then an
optional ``--config`` file of ``key = value`` lines, then explicit flags.
Exit codes: 0 success, 1 numerical or I/O failure, 2 usage error.
"""
import argparse
import csv
from dataclasses import asdict, dataclass, field
import io
import json
import logging
import math
import os
import sys

import numpy as np

from . import __version__, _backend
from .errors import InvalidParameterError, MicromaserError
from .steady_state import GAIN_MODES, MaserParams, steady_state
from .transfer import SweepRow, evaluate_point, sweep_D, sweep_kappa

log = logging.getLogger("micromaser")

COMMANDS = ("steady", "point", "sweep-d", "sweep-kappa", "fig1", "fig2")
WORKERS_ENV = "MICROMASER_WORKERS"
FIG1_GT = (math.pi / 10, math.pi / 2, 3 * math.pi / 2, math.pi)

# config key -> (RunConfig attribute, parser)
_KEYS = {
    "N": ("N", float),
    "gt": ("gt", float),
    "nth": ("n_th", float),
    "kappa_ratio": ("kappa_ratio", float),
    "n_max": ("n_max", int),
    "theta": ("theta", float),
    "gain": ("gain", str),
    "base": ("base", float),
    "start": ("start", float),
    "stop": ("stop", float),
    "count": ("count", int),
    "spacing": ("spacing", str),
    "gt_list": ("gt_list", lambda s: tuple(float(x) for x in s.split(","))),
    "output": ("output", str),
    "workers": ("workers", int),
    "plot_script": ("plot_script", str),
}
_FLAG_OF = {attr: "--" + key.replace("_", "-") for key, (attr, _) in _KEYS.items()}

_RECIPES = {
    "fig1": dict(N=100.0, n_th=0.01, gain="damped", start=1e-6, stop=1e-1,
                 count=25, spacing="log", gt_list=FIG1_GT),
    "fig2": dict(N=100.0, n_th=0.01, kappa_ratio=1e-6, gain="unitary",
                 start=0.2, stop=40.0, count=200, spacing="linear"),
    "sweep-d": dict(start=0.2, stop=40.0, count=200, spacing="linear"),
    "sweep-kappa": dict(start=1e-6, stop=1e-1, count=25, spacing="log", gt_list=FIG1_GT),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    N: float = 100.0
    gt: float = math.pi / 10
    kappa_ratio: float = 1e-6
    n_th: float = 0.01
    n_max: int = 256
    theta: float = 0.0
    gain: str = "unitary"
    base: float = 2.0
    start: float = 0.2
    stop: float = 40.0
    count: int = 200
    spacing: str = "linear"
    gt_list: tuple = field(default=FIG1_GT)
    output: str = None
    workers: int = 1
    plot_script: str = None

    def params(self):
        return MaserParams(N=self.N, gt=self.gt, kappa_ratio=self.kappa_ratio,
                           n_th=self.n_th, n_max=self.n_max, theta=self.theta)

    def grid(self):
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


def _build_parser():
    parser = argparse.ArgumentParser(prog="micromaser", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="file of `key = value` lines")
    common.add_argument("-v", "--verbose", action="store_true")
    for key, (attr, conv) in _KEYS.items():
        kw = {"dest": attr, "default": None}
        if conv in (float, int):
            kw["type"] = conv
        elif key == "gt_list":
            kw["type"] = _KEYS["gt_list"][1]
            kw["metavar"] = "GT[,GT...]"
        if key == "gain":
            kw["choices"] = GAIN_MODES
        if key == "spacing":
            kw["choices"] = ("linear", "log")
        flags = [_FLAG_OF[attr]]
        if key == "output":
            flags.insert(0, "-o")
        common.add_argument(*flags, **kw)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def read_config_file(path):
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected `key = value`")
        key, value = (part.strip() for part in line.split("=", 1))
        norm = key.replace("-", "_")
        if norm not in _KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key `{key}`")
        attr, conv = _KEYS[norm]
        try:
            values[attr] = conv(value)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for `{key}`: {value}") from exc
    return values


def parse_config(args=None):
    """Turn argv into a validated :class:`RunConfig`; raises :class:`UsageError`."""
    ns = _build_parser().parse_args(args)
    merged = dict(_RECIPES.get(ns.command, {}))
    if ns.config:
        merged.update(read_config_file(ns.config))
    merged.update({attr: getattr(ns, attr) for attr, _ in _KEYS.values()
                   if getattr(ns, attr) is not None})
    if "workers" not in merged and os.environ.get(WORKERS_ENV):
        try:
            merged["workers"] = int(os.environ[WORKERS_ENV])
        except ValueError as exc:
            raise UsageError(f"{WORKERS_ENV} must be an integer") from exc
    cfg = RunConfig(command=ns.command, **merged)
    _validate(cfg)
    if ns.verbose:
        logging.basicConfig(level=logging.INFO)
    return cfg


def _validate(cfg):
    try:
        cfg.params()
    except InvalidParameterError as exc:
        flag = _FLAG_OF.get(exc.name, exc.name)
        raise UsageError(f"{flag}: {str(exc).split(': ', 1)[1]}") from exc
    if cfg.gain not in GAIN_MODES:
        raise UsageError(f"--gain: expected one of {GAIN_MODES}")
    if not cfg.base > 1:
        raise UsageError("--base: must be > 1")
    if cfg.count < 1:
        raise UsageError("--count: must be >= 1")
    if cfg.count > 1 and not cfg.start < cfg.stop:
        raise UsageError("--start/--stop: need start < stop when count > 1")
    if cfg.spacing == "log" and not (cfg.start > 0 and cfg.stop > 0):
        raise UsageError("--spacing: log spacing needs positive --start and --stop")
    if cfg.command in ("sweep-d", "fig2") and cfg.start < 0:
        raise UsageError("--start: D values must be >= 0")
    if cfg.command in ("sweep-kappa", "fig1") and cfg.start < 0:
        raise UsageError("--start: kappa-ratio values must be >= 0")
    if any(g < 0 for g in cfg.gt_list):
        raise UsageError("--gt-list: Rabi angles must be >= 0")
    if cfg.workers < 1:
        raise UsageError("--workers: must be >= 1")


def _fmt(x):
    return format(float(x), ".12g")


def format_rows(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SweepRow.columns())
    for row in rows:
        writer.writerow([_fmt(v) for v in row.values()])
    return buf.getvalue()


def format_distribution(P):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "P"])
    for n, p in enumerate(P.probs):
        writer.writerow([n, _fmt(p)])
    return buf.getvalue()


def compute(cfg):
    """Rows (or a distribution, for ``steady``) for a validated config."""
    base = cfg.params()
    if cfg.command == "steady":
        P, _ = steady_state(base, cfg.gain)
        return P
    if cfg.command == "point":
        return [evaluate_point(base, cfg.gain, cfg.base)]
    if cfg.command in ("sweep-d", "fig2"):
        return sweep_D(base, cfg.grid(), cfg.gain, cfg.base, cfg.workers)
    return sweep_kappa(base, cfg.grid(), cfg.gt_list, cfg.base, cfg.workers)


def metadata(cfg, rows):
    meta = {
        "artifact": "micromaser",
        "version": __version__,
        "backend": _backend.backend_name(),
        "config": {k: v for k, v in asdict(cfg).items() if k != "plot_script"},
    }
    if isinstance(rows, list):
        meta["grid"] = [float(x) for x in cfg.grid()] if cfg.command != "point" else []
        meta["rows"] = len(rows)
        meta["failed"] = [{"index": i, "error": r.error} for i, r in enumerate(rows) if r.error]
    return meta


def plot_script(csv_path, command):
    if command in ("fig1", "sweep-kappa"):
        body = (
            "for gt in sorted(set(r['gt'] for r in rows)):\n"
            "    sel = [r for r in rows if r['gt'] == gt]\n"
            "    plt.semilogx([r['kappa_ratio'] for r in sel], [r['EF'] for r in sel],\n"
            "                 label=f'gt = {gt:.4f}')\n"
            "plt.xlabel('kappa/g')\nplt.ylabel('EF')\n"
        )
    else:
        body = (
            "D = [r['D'] for r in rows]\n"
            "plt.plot(D, [r['EF'] for r in rows], label='EF')\n"
            "plt.plot(D, [r['v'] / 10 for r in rows], label='v/10')\n"
            "plt.plot(D, [r['dS'] for r in rows], label='S_2 - S_ss')\n"
            "plt.xlabel('D')\n"
        )
    return (
        "import csv\n\nimport matplotlib.pyplot as plt\n\n"
        f"with open({csv_path!r}, newline='') as fh:\n"
        "    rows = [{k: float(v) for k, v in r.items()} for r in csv.DictReader(fh)]\n\n"
        + body +
        "plt.legend()\nplt.show()\n"
    )


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def run(cfg):
    try:
        result = compute(cfg)
    except MicromaserError as exc:
        print(f"micromaser: {exc}", file=sys.stderr)
        return 1
    text = format_distribution(result) if cfg.command == "steady" else format_rows(result)
    output = cfg.output or f"{cfg.command}.csv"
    try:
        if output == "-":
            sys.stdout.write(text)
        else:
            _write(output, text)
            _write(output + ".meta.json",
                   json.dumps(metadata(cfg, result), indent=2, sort_keys=True) + "\n")
        if cfg.plot_script:
            _write(cfg.plot_script, plot_script(output, cfg.command))
    except OSError as exc:
        print(f"micromaser: cannot write output: {exc}", file=sys.stderr)
        return 1
    if isinstance(result, list) and any(r.error for r in result):
        print("micromaser: some points failed; see metadata", file=sys.stderr)
        return 1
    return 0


def main(argv=None):
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"micromaser: error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
