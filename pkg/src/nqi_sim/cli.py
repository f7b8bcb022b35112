"""Command-line front end: ``nqi-sim [options]``."""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

from .atom import AtomSuperposition
from .fock import ATOL, Path
from .measurement import Category, OutcomeRecord, category_probabilities
from .protocol import (
    SCHEME_CATALOG,
    ExperimentConfig,
    Scheme,
    monte_carlo,
    run_repeated,
)

CSV_HEADER = ["pattern", "probability", "post_alpha_re", "post_alpha_im", "post_beta_re", "post_beta_im", "category", "fidelity"]
FORMATS = ("text", "json", "csv")


@dataclass(frozen=True)
class RunRequest:
    config: ExperimentConfig
    format: str = "text"
    out: str | None = None
    list_schemes: bool = False


def _sig12(x: float) -> float:
    # round-off residue below 1e-12 is printed as an exact zero
    return 0.0 if abs(x) < 1e-12 else float(f"{x:.12g}")


def _sig12_text(x: float) -> str:
    return f"{_sig12(x):.12g}"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nqi-sim",
        description="Exact simulation of nondistortion quantum interrogation in a four-port Mach-Zehnder interferometer.",
    )
    p.add_argument("--list", action="store_true", help="list the available probe schemes and exit")
    p.add_argument("--scheme", choices=[s.value for s in Scheme], default=Scheme.EPR_LINEAR.value)
    amp = p.add_argument_group("atom state (default alpha = beta = 1/sqrt2)")
    for name in ("alpha-re", "alpha-im", "beta-re", "beta-im"):
        amp.add_argument(f"--{name}", type=float, default=None)
    amp.add_argument("--bloch", metavar="THETA,PHI", help="set (alpha, beta) = (cos(theta/2), exp(i phi) sin(theta/2))")
    amp.add_argument("--keep-phase", action="store_true", help="do not rotate the global phase so that alpha is real and >= 0")
    atom = p.add_mutually_exclusive_group()
    atom.add_argument("--atom", dest="atom_present", action="store_true", default=True)
    atom.add_argument("--no-atom", dest="atom_present", action="store_false")
    p.add_argument("--arm", choices=["lower", "upper"], default="lower", help="interferometer arm holding the atom")
    p.add_argument("--rounds", type=int, default=1, help="number of repeated rounds (>= 1)")
    p.add_argument("--mc-trials", type=int, default=0, help="Monte Carlo trials (0 disables sampling)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--format", choices=FORMATS, default="text")
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    return p


def _atom_from_args(parser: argparse.ArgumentParser, ns: argparse.Namespace) -> AtomSuperposition:
    parts = [ns.alpha_re, ns.alpha_im, ns.beta_re, ns.beta_im]
    if ns.bloch is not None:
        if any(v is not None for v in parts):
            parser.error("--bloch cannot be combined with --alpha-*/--beta-* flags")
        try:
            theta, phi = (float(v) for v in ns.bloch.split(","))
        except ValueError:
            parser.error(f"--bloch expects THETA,PHI, got {ns.bloch!r}")
        return AtomSuperposition.from_bloch(theta, phi)
    if all(v is None for v in parts):
        return AtomSuperposition(1 / math.sqrt(2), 1 / math.sqrt(2))
    a_re, a_im, b_re, b_im = (0.0 if v is None else v for v in parts)
    alpha, beta = complex(a_re, a_im), complex(b_re, b_im)
    norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm - 1) > ATOL:
        parser.error(f"atom amplitudes must satisfy |alpha|^2 + |beta|^2 = 1 (got {norm:.12g})")
    return AtomSuperposition(alpha, beta)


def parse_args(argv: list[str] | None = None) -> RunRequest:
    parser = build_parser()
    ns = parser.parse_args(argv)
    atom = _atom_from_args(parser, ns)
    if not ns.keep_phase and abs(atom.alpha) > 0:
        atom = atom.with_global_phase(-cmath.phase(atom.alpha))
        atom = AtomSuperposition(complex(atom.alpha.real, 0.0), atom.beta)
    if ns.rounds < 1:
        parser.error("--rounds must be >= 1")
    if ns.mc_trials < 0:
        parser.error("--mc-trials must be >= 0")
    config = ExperimentConfig(
        scheme=Scheme(ns.scheme),
        alpha=atom.alpha,
        beta=atom.beta,
        atom_present=ns.atom_present,
        atom_arm=Path.LOWER if ns.arm == "lower" else Path.UPPER,
        max_rounds=ns.rounds,
        mc_trials=ns.mc_trials,
        rng_seed=ns.seed,
    )
    return RunRequest(config, ns.format, ns.out, ns.list)


def list_schemes(stream=None) -> None:
    stream = stream or sys.stdout
    for scheme, (probe, desc) in SCHEME_CATALOG.items():
        print(f"{scheme.value:22s} probe {probe:48s} {desc}", file=stream)


def _complex_pair(z: complex) -> list[float]:
    return [_sig12(z.real), _sig12(z.imag)]


def _outcome_dict(r: OutcomeRecord) -> dict:
    return {
        "pattern": str(r.pattern),
        "probability": _sig12(r.probability),
        "post_atom": None if r.post_atom is None else {"alpha": _complex_pair(r.post_atom.alpha), "beta": _complex_pair(r.post_atom.beta)},
        "category": r.category.value,
        "fidelity": None if r.fidelity is None else _sig12(r.fidelity),
    }


def _config_dict(c: ExperimentConfig) -> dict:
    return {
        "scheme": c.scheme.value,
        "alpha": _complex_pair(complex(c.alpha)),
        "beta": _complex_pair(complex(c.beta)),
        "atom_present": c.atom_present,
        "atom_arm": "lower" if c.atom_arm is Path.LOWER else "upper",
        "max_rounds": c.max_rounds,
        "mc_trials": c.mc_trials,
        "rng_seed": c.rng_seed,
    }


def _post_text(r: OutcomeRecord) -> str:
    if r.post_atom is None:
        return "|g>"
    a, b = r.post_atom.alpha, r.post_atom.beta
    return f"({_fmt_complex(a)}, {_fmt_complex(b)})"


def _fmt_complex(z: complex) -> str:
    re, im = round(z.real, 6) + 0.0, round(z.imag, 6) + 0.0
    if im == 0:
        return f"{re:g}"
    if re == 0:
        return f"{im:g}i"
    return f"{re:g}{im:+g}i"


def render_json(config, records, report, mc) -> str:
    doc = {
        "config": _config_dict(config),
        "outcomes": [_outcome_dict(r) for r in records],
        "cumulative": [
            {"round": k + 1, **{c.value: _sig12(p) for c, p in snap.items()}} for k, snap in enumerate(report.cumulative)
        ],
        "mc": {} if mc is None else {
            "trials": mc.trials,
            "seed": mc.seed,
            "pattern_counts": mc.pattern_counts,
            "category_counts": {c.value: n for c, n in mc.category_counts.items()},
            "category_frequencies": {c.value: _sig12(f) for c, f in mc.frequencies().items()},
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def render_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        if r.post_atom is None:
            post = ["", "", "", ""]
        else:
            post = [_sig12_text(v) for v in (r.post_atom.alpha.real, r.post_atom.alpha.imag, r.post_atom.beta.real, r.post_atom.beta.imag)]
        fid = "" if r.fidelity is None else _sig12_text(r.fidelity)
        w.writerow([str(r.pattern), _sig12_text(r.probability), *post, r.category.value, fid])
    return buf.getvalue()


def render_text(config, records, report, mc) -> str:
    lines = [
        f"scheme {config.scheme.value}, atom {'present' if config.atom_present else 'absent'}"
        f" ({'lower' if config.atom_arm is Path.LOWER else 'upper'} arm),"
        f" initial atom ({_fmt_complex(complex(config.alpha))}, {_fmt_complex(complex(config.beta))})",
        "",
        f"{'pattern':<12} {'probability':>11}  {'post-atom':<26} {'category':<22} {'fidelity':>8}",
    ]
    for r in records:
        fid = "" if r.fidelity is None else f"{r.fidelity:.6f}"
        lines.append(f"{str(r.pattern):<12} {r.probability:>11.6f}  {_post_text(r):<26} {r.category.value:<22} {fid:>8}")
    lines += ["", "category totals"]
    for c, p in category_probabilities(records).items():
        if p > 0:
            lines.append(f"  {c.value:<22} {p:>11.6f}")
    if config.max_rounds > 1:
        cats = list(Category)
        lines += ["", "cumulative after k rounds (NotDetectedRepeatable = mass still repeating)"]
        lines.append(f"{'k':>4} " + " ".join(f"{c.value:>22}" for c in cats))
        for k, snap in enumerate(report.cumulative, start=1):
            lines.append(f"{k:>4} " + " ".join(f"{snap[c]:>22.6f}" for c in cats))
    if mc is not None:
        lines += ["", f"Monte Carlo: {mc.trials} trials, seed {mc.seed}"]
        freqs = mc.frequencies()
        for c in Category:
            lines.append(f"  {c.value:<22} {mc.category_counts[c]:>10d} {freqs[c]:>10.6f}")
    return "\n".join(lines) + "\n"


def execute(request: RunRequest) -> int:
    if request.list_schemes:
        text = io.StringIO()
        list_schemes(text)
        return _emit(text.getvalue(), request.out)
    config = request.config
    report = run_repeated(config)
    records = report.rounds[0]
    mc = monte_carlo(config) if config.mc_trials > 0 else None
    if request.format == "json":
        out = render_json(config, records, report, mc)
    elif request.format == "csv":
        out = render_csv(records)
    else:
        out = render_text(config, records, report, mc)
    return _emit(out, request.out)


def _emit(text: str, path: str | None) -> int:
    if path is None:
        sys.stdout.write(text)
        return 0
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"nqi-sim: cannot write {path}: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    return execute(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
