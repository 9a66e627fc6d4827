"""Command-line front end: ``forward``, ``compare-born``, ``invert``, ``demo``."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__, imaging, operators, pipeline
from .config import ConfigError, RunConfig, load_config

NORM_FLAGS = {"entrywise": "entrywise_max", "induced": "induced_inf"}


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors also come out as JSON on stderr
    def error(self, message):
        raise CliError(message)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write(path: Path, data) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, bytes):
        path.write_bytes(data)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
    return path


def provenance(cfg: RunConfig, command: str, **extra) -> dict:
    """Everything needed to re-run: config echo, seed, model and version."""
    p = {
        "toolkit": "biharmfm",
        "version": __version__,
        "command": command,
        "forward_model": cfg.model,
        "seed": cfg.seed,
        "noise_normalization": cfg.noise_normalization,
        "config": cfg.to_dict(),
    }
    p.update(extra)
    return p


def _config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    over = {}
    if getattr(args, "model", None):
        over["model"] = args.model
    if getattr(args, "seed", None) is not None:
        over["seed"] = args.seed
    if over:
        cfg = replace(cfg, **over)
        cfg.validate()
    return cfg


def _out_dir(args, cfg: RunConfig) -> Path:
    return Path(args.out or cfg.out_dir)


def write_field(out: Path, cfg: RunConfig, field_: imaging.IndicatorField) -> list[str]:
    written = []
    if "csv" in cfg.formats:
        written.append(str(_write(out / "indicator.csv", imaging.field_to_csv(field_))))
    if "pgm" in cfg.formats:
        written.append(str(_write(out / "indicator.pgm", imaging.field_to_pgm(field_))))
    return written


def run_forward(cfg: RunConfig, out: Path) -> dict:
    F = pipeline.simulate(cfg)
    Fn = operators.add_noise(F, cfg.noise)
    _write(out / "farfield.csv", operators.farfield_to_csv(Fn))
    _write(out / "provenance.json", _dump(provenance(cfg, "forward", farfield=Fn.provenance)))
    return {"farfield": str(out / "farfield.csv"), "N": Fn.N, "model": cfg.model}


def run_compare(cfg: RunConfig, out: Path | None, norm: str = "entrywise") -> dict:
    if cfg.shape.type != "disk":
        raise pipeline.ModelError("compare-born needs a disk shape")
    rows = pipeline.compare_born(cfg)
    matched = pipeline.matching_conventions(rows)
    report = {
        "kappa": cfg.kappa, "n": [cfg.n_re, cfg.n_im], "N": cfg.directions, "lmax": cfg.lmax,
        "h_factor": cfg.h_factor,
        "selected_convention": NORM_FLAGS[norm],
        "rows": [{"eps": r.eps, "entrywise_max": r.entrywise_max, "induced_inf": r.induced_inf,
                  "reference": r.reference} for r in rows],
        "matched_conventions": matched,
    }
    if out is not None:
        _write(out / "compare_born.json", _dump(report))
        _write(out / "provenance.json", _dump(provenance(cfg, "compare-born", norm=norm)))
    return report


def format_compare(report: dict) -> str:
    sel = report["selected_convention"]
    lines = [f"{'eps':>5}  {'entrywise_max':>14}  {'induced_inf':>12}  {'reference':>9}"]
    for r in report["rows"]:
        ref = "" if r["reference"] is None else f"{r['reference']:.4f}"
        lines.append(f"{r['eps']:5.2f}  {r['entrywise_max']:14.4f}  {r['induced_inf']:12.4f}  {ref:>9}")
    m = report["matched_conventions"]
    lines.append(f"selected: {sel}; within 20% of reference on every row: "
                 + (", ".join(m) if m else "none"))
    return "\n".join(lines)


def run_invert(cfg: RunConfig, F: operators.FarFieldMatrix, out: Path, command="invert",
               **extra) -> dict:
    Fn, spec, field_, metrics = pipeline.invert(cfg, F, cfg.shape.build())
    metrics["data_reading"] = cfg.data
    metrics["imaging_mode"] = cfg.mode
    metrics.update({k: v for k, v in field_.meta.items() if k.startswith("liminf")})
    _write(out / "farfield.csv", operators.farfield_to_csv(Fn))
    files = write_field(out, cfg, field_)
    _write(out / "metrics.json", _dump(metrics))
    _write(out / "provenance.json", _dump(provenance(cfg, command, **extra)))
    return {"files": files, "metrics": metrics}


def run_demo(name: str, out: Path, seed: int = 0) -> dict:
    cfg = pipeline.demo_config(name, seed=seed)
    results = {}
    models = ("exact", "born") if name == "disk_fig2" else (cfg.model,)
    for model in models:
        c = replace(cfg, model=model)
        target = out / model if len(models) > 1 else out
        F = pipeline.simulate(c)
        results[model] = run_invert(c, F, target, command="demo", demo=name)["metrics"]
    return results


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="biharmfm", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--config", help="JSON run configuration")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--seed", type=int, help="noise seed override")
        sp.add_argument("--model", choices=("exact", "born"), help="forward model override")

    common(sub.add_parser("forward", help="simulate a far-field matrix"))
    c = sub.add_parser("compare-born", help="exact vs Born error for centred disks")
    common(c)
    c.add_argument("--norm", choices=tuple(NORM_FLAGS), default="entrywise")
    i = sub.add_parser("invert", help="image a far-field CSV")
    common(i)
    i.add_argument("--farfield", required=True, help="far-field CSV")
    d = sub.add_parser("demo", help="run a reference experiment")
    d.add_argument("name")
    d.add_argument("--out", help="output directory (default out/<name>)")
    d.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "demo":
            res = run_demo(args.name, Path(args.out or f"out/{args.name}"), seed=args.seed)
            print(_dump(res), end="")
        elif args.command == "forward":
            cfg = _config(args)
            print(_dump(run_forward(cfg, _out_dir(args, cfg))), end="")
        elif args.command == "compare-born":
            cfg = _config(args)
            report = run_compare(cfg, _out_dir(args, cfg), args.norm)
            print(format_compare(report))
        else:
            cfg = _config(args)
            path = Path(args.farfield)
            raw = path.read_text(encoding="utf-8")
            F = operators.farfield_from_csv(raw)
            digest = hashlib.sha256(raw.encode("utf-8")).hexdigest()
            res = run_invert(cfg, F, _out_dir(args, cfg), farfield_sha256=digest)
            print(_dump(res["metrics"]), end="")
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (CliError, ConfigError, KeyError, ValueError, OSError, ArithmeticError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": msg}) + "\n")
        return 2 if isinstance(exc, (CliError, ConfigError)) else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
