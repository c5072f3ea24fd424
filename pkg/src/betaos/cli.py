"""Command-line front end: single solves, parameter sweeps, certification.

Subcommands
-----------
solve          one (profile, alpha, R, beta) case; prints a mode table
sweep          (alpha, R, beta) grid -> results.csv + manifest.json
profiles list  builtin profile catalog
certify        re-run certificates on a spectrum saved by ``solve``

Exit codes: 0 success, 1 operational error, 2 at least one converged mode
violated a bound beyond tolerance (the scientifically loud outcome).

Sweep outputs are deterministic: cases run in (alpha outer, R middle, beta
inner) order, rows are written in that order regardless of worker scheduling,
and floats are printed with 17 significant digits.  The worker pool size is
capped by the BETA_OS_THREADS environment variable (0 = auto).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .bounds import BOUND_TOL, BoundCertificate, certify as make_certificate
from .eigensolver import (
    DEFAULT_AGREE_TOL,
    DEFAULT_N,
    Eigenpair,
    EigensolverError,
    FlowParameters,
    solve_spectrum,
)
from .functionals import IdentityReport, energy_integrals, verify_identities
from .profiles import UnknownProfileError, VelocityProfile, builtin_names, load_profile
from .spectral import N_MAX, N_MIN, build_grid

__all__ = ["SweepConfig", "ModeRecord", "CaseResult", "run_single", "run_sweep", "main"]

CSV_HEADER = (
    "alpha,reynolds,beta,mode_rank,c_r,c_i,converged,"
    "ci_ceiling,cr_lower,cr_upper,cr_case,identity_residual"
)


@dataclass(frozen=True)
class SweepConfig:
    """Sweep description; ranges are (start, stop, count) triples.

    Reynolds numbers are spaced logarithmically, alpha and beta linearly.
    Fully deterministic: no seeds, no wall-clock dependence in outputs.
    """

    profile: str
    alpha_range: tuple[float, float, int]
    reynolds_range: tuple[float, float, int]
    beta_range: tuple[float, float, int]
    n: int = DEFAULT_N
    modes_kept: int = 5
    output_dir: str = "sweep_out"
    kappa: float = 1.0
    agree_tol: float = DEFAULT_AGREE_TOL

    def __post_init__(self) -> None:
        for name, (start, stop, count) in (
            ("alpha_range", self.alpha_range),
            ("reynolds_range", self.reynolds_range),
            ("beta_range", self.beta_range),
        ):
            if count < 1:
                raise ValueError(f"{name}: count must be >= 1")
            if start > stop:
                raise ValueError(f"{name}: start must not exceed stop")
        if self.reynolds_range[0] <= 0.0:
            raise ValueError("reynolds_range must be positive (log spacing)")
        if not (max(N_MIN, 32) <= self.n <= N_MAX):
            raise ValueError(f"n must be within [{max(N_MIN, 32)}, {N_MAX}]")
        if self.modes_kept < 1:
            raise ValueError("modes_kept must be >= 1")

    def alphas(self) -> np.ndarray:
        s, e, c = self.alpha_range
        return np.linspace(s, e, c)

    def reynoldses(self) -> np.ndarray:
        s, e, c = self.reynolds_range
        return np.geomspace(s, e, c)

    def betas(self) -> np.ndarray:
        s, e, c = self.beta_range
        return np.linspace(s, e, c)

    def cases(self) -> list[FlowParameters]:
        return [
            FlowParameters(alpha=float(a), reynolds=float(r), beta=float(b))
            for a in self.alphas()
            for r in self.reynoldses()
            for b in self.betas()
        ]


@dataclass(frozen=True)
class ModeRecord:
    """One kept mode with its certificate and identity report."""

    rank: int
    pair: Eigenpair
    certificate: BoundCertificate
    identity: IdentityReport

    @property
    def violates(self) -> bool:
        return self.certificate.ci_margin < -BOUND_TOL or not self.certificate.cr_in_band


@dataclass
class CaseResult:
    """Certified output of one (alpha, R, beta) case (kept modes only)."""

    params: FlowParameters
    modes: list[ModeRecord] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def eigenvalues(self) -> list[tuple[complex, bool]]:
        return [(m.pair.c, m.pair.converged) for m in self.modes]

    @property
    def certificates(self) -> list[BoundCertificate]:
        return [m.certificate for m in self.modes]

    @property
    def identities(self) -> list[IdentityReport]:
        return [m.identity for m in self.modes]

    @property
    def bound_violations(self) -> int:
        return sum(m.violates for m in self.modes)


def run_single(
    profile: VelocityProfile,
    params: FlowParameters,
    n: int = DEFAULT_N,
    modes_kept: int = 5,
    agree_tol: float = DEFAULT_AGREE_TOL,
) -> CaseResult:
    """Solve one case and certify the top converged modes."""
    t0 = time.perf_counter()
    pairs = solve_spectrum(profile, params, n, agree_tol=agree_tol)
    grid = build_grid(n)
    result = CaseResult(params=params)
    rank = 0
    for pair in pairs:
        if not pair.converged:
            continue
        rank += 1
        if rank > modes_kept:
            break
        ef = energy_integrals(pair.phi, profile, params, grid)
        cert = make_certificate(pair, ef, profile, params)
        ident = verify_identities(pair, ef, params)
        result.modes.append(ModeRecord(rank=rank, pair=pair, certificate=cert, identity=ident))
    result.wall_time = time.perf_counter() - t0
    return result


def _f17(x: float) -> str:
    return format(float(x), ".17g")


def _csv_rows(result: CaseResult) -> list[str]:
    p = result.params
    rows = []
    for m in result.modes:
        cert = m.certificate
        rows.append(
            ",".join(
                [
                    _f17(p.alpha),
                    _f17(p.reynolds),
                    _f17(p.beta),
                    str(m.rank),
                    _f17(m.pair.c.real),
                    _f17(m.pair.c.imag),
                    "true" if m.pair.converged else "false",
                    _f17(cert.ci_ceiling),
                    _f17(cert.cr_band[0]),
                    _f17(cert.cr_band[1]),
                    cert.cr_case.value,
                    _f17(m.identity.identity_residual),
                ]
            )
        )
    return rows


def _worker_count(n_cases: int) -> int:
    raw = os.environ.get("BETA_OS_THREADS", "0")
    try:
        requested = int(raw)
    except ValueError:
        raise ValueError(f"BETA_OS_THREADS must be an integer; got {raw!r}") from None
    if requested <= 0:
        requested = os.cpu_count() or 1
    return max(1, min(requested, n_cases))


def run_sweep(config: SweepConfig, quiet: bool = False) -> dict:
    """Run the sweep, writing results.csv and manifest.json case by case.

    Cases execute concurrently but rows are written in case-index order, so
    reruns with an identical config produce byte-identical files and an
    interrupted run loses at most the case in flight.
    """
    out_dir = Path(config.output_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / "results.csv"
        csv_file = csv_path.open("w", newline="")
    except OSError as exc:
        raise OSError(f"cannot write to output dir {out_dir}: {exc}") from exc

    profile = load_profile(config.profile, kappa=config.kappa)
    cases = config.cases()

    def one(params: FlowParameters) -> CaseResult | Exception:
        try:
            return run_single(
                profile, params, config.n,
                modes_kept=config.modes_kept, agree_tol=config.agree_tol,
            )
        except Exception as exc:  # captured per case; sweep continues
            return exc

    cases_failed = 0
    violations = 0
    max_residual = 0.0
    with csv_file:
        csv_file.write(CSV_HEADER + "\n")
        csv_file.flush()
        with ThreadPoolExecutor(max_workers=_worker_count(len(cases))) as pool:
            for params, outcome in zip(cases, pool.map(one, cases)):
                if isinstance(outcome, Exception):
                    cases_failed += 1
                    if not quiet:
                        print(f"case {params} failed: {outcome}", file=sys.stderr)
                    continue
                violations += outcome.bound_violations
                for m in outcome.modes:
                    max_residual = max(max_residual, m.identity.identity_residual)
                for row in _csv_rows(outcome):
                    csv_file.write(row + "\n")
                csv_file.flush()

    config_doc = dataclasses.asdict(config)
    for key in ("alpha_range", "reynolds_range", "beta_range"):
        config_doc[key] = list(config_doc[key])
    manifest = {
        "config": config_doc,
        "version": __version__,
        "cases_total": len(cases),
        "cases_failed": cases_failed,
        "bound_violations": violations,
        "max_identity_residual": max_residual,
    }
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    if not quiet:
        print(
            f"wrote {csv_path} and {manifest_path}: {len(cases)} cases, "
            f"{cases_failed} failed, {violations} bound violations, "
            f"max identity residual {max_residual:.3e}"
        )
    return manifest


# ---------------------------------------------------------------------------
# spectrum save / reload for `certify`

def save_spectrum(
    path: str | Path,
    profile_spec: str,
    kappa: float,
    params: FlowParameters,
    n: int,
    result: CaseResult,
) -> None:
    doc = {
        "profile": profile_spec,
        "kappa": kappa,
        "alpha": params.alpha,
        "reynolds": params.reynolds,
        "beta": params.beta,
        "n": n,
        "modes": [
            {
                "rank": m.rank,
                "c_r": m.pair.c.real,
                "c_i": m.pair.c.imag,
                "residual": m.pair.residual,
                "drift": m.pair.drift,
                "converged": m.pair.converged,
                "phi_re": m.pair.phi.real.tolist(),
                "phi_im": m.pair.phi.imag.tolist(),
            }
            for m in result.modes
        ],
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True) + "\n")


def load_spectrum(path: str | Path) -> tuple[VelocityProfile, FlowParameters, int, list[Eigenpair]]:
    doc = json.loads(Path(path).read_text())
    profile = load_profile(doc["profile"], kappa=doc.get("kappa", 1.0))
    params = FlowParameters(alpha=doc["alpha"], reynolds=doc["reynolds"], beta=doc["beta"])
    n = int(doc["n"])
    pairs = []
    for m in doc["modes"]:
        phi = np.asarray(m["phi_re"], dtype=float) + 1j * np.asarray(m["phi_im"], dtype=float)
        pairs.append(
            Eigenpair(
                c=complex(m["c_r"], m["c_i"]),
                phi=phi,
                residual=float(m["residual"]),
                converged=bool(m["converged"]),
                drift=float(m["drift"]),
            )
        )
    return profile, params, n, pairs


# ---------------------------------------------------------------------------
# presentation

def _print_case(result: CaseResult, profile: VelocityProfile, n: int) -> None:
    p = result.params
    print(
        f"profile={profile.name} alpha={p.alpha:g} reynolds={p.reynolds:g} "
        f"beta={p.beta:g} n={n}  ({result.wall_time:.2f}s)"
    )
    if not result.modes:
        print("no converged modes (spectrum unresolved at this n)")
        return
    print(
        f"{'rank':>4} {'c_r':>22} {'c_i':>22} {'drift':>9} {'ceiling':>12} "
        f"{'band':>28} {'ok':>3} {'ident':>9}"
    )
    for m in result.modes:
        cert = m.certificate
        band = f"[{cert.cr_band[0]:+.6f}, {cert.cr_band[1]:+.6f}]"
        ok = "no" if m.violates else "yes"
        print(
            f"{m.rank:>4} {m.pair.c.real:>22.15f} {m.pair.c.imag:>22.15f} "
            f"{m.pair.drift:>9.1e} {cert.ci_ceiling:>12.6f} {band:>28} {ok:>3} "
            f"{m.identity.identity_residual:>9.1e}"
        )


# ---------------------------------------------------------------------------
# argument handling

def _load_config_file(path: str) -> dict:
    p = Path(path)
    text = p.read_bytes()
    if p.suffix.lower() == ".toml":
        try:
            import tomllib  # type: ignore[import-not-found]
        except ModuleNotFoundError:
            import tomli as tomllib
        return tomllib.loads(text.decode())
    if p.suffix.lower() == ".json":
        return json.loads(text)
    raise ValueError(f"config file must be .toml or .json; got {p.name}")


_CONFIG_KEYS = {
    "profile", "alpha_range", "reynolds_range", "beta_range",
    "n", "modes_kept", "output_dir", "kappa", "agree_tol",
}


def _sweep_config(args: argparse.Namespace) -> SweepConfig:
    values: dict = {}
    if args.config:
        loaded = _load_config_file(args.config)
        unknown = set(loaded) - _CONFIG_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)
    for key in ("profile", "n", "modes_kept", "output_dir", "kappa", "agree_tol"):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    for key in ("alpha_range", "reynolds_range", "beta_range"):
        flag = getattr(args, key)
        if flag is not None:
            values[key] = (flag[0], flag[1], int(flag[2]))
    if "profile" not in values:
        raise ValueError("sweep needs a profile (flag --profile or config file)")
    for key in ("alpha_range", "reynolds_range", "beta_range"):
        if key not in values:
            raise ValueError(f"sweep needs {key} (flag --{key.replace('_', '-')} or config file)")
        triple = values[key]
        if len(triple) != 3:
            raise ValueError(f"{key} must be a (start, stop, count) triple")
        values[key] = (float(triple[0]), float(triple[1]), int(triple[2]))
    return SweepConfig(**values)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="betaos",
        description="Viscous shear-flow stability on the beta plane with certified eigenvalue bounds.",
    )
    parser.add_argument("--version", action="version", version=f"betaos {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sv = sub.add_parser("solve", help="solve one case and certify its leading modes")
    sv.add_argument("--profile", required=True, help="builtin name or z,U CSV path")
    sv.add_argument("--alpha", type=float, required=True)
    sv.add_argument("--reynolds", type=float, required=True)
    sv.add_argument("--beta", type=float, default=0.0)
    sv.add_argument("--kappa", type=float, default=1.0, help="steepness of tanh_layer/bickley_jet")
    sv.add_argument("--n", type=int, default=DEFAULT_N)
    sv.add_argument("--modes-kept", type=int, default=5)
    sv.add_argument("--agree-tol", type=float, default=DEFAULT_AGREE_TOL)
    sv.add_argument("--save-spectrum", metavar="PATH", help="write kept modes to a JSON spectrum file")

    sw = sub.add_parser("sweep", help="run an (alpha, R, beta) sweep to CSV + manifest")
    sw.add_argument("--config", help="TOML or JSON file mirroring the sweep fields")
    sw.add_argument("--profile")
    sw.add_argument("--kappa", type=float)
    sw.add_argument("--alpha-range", nargs=3, type=float, metavar=("START", "STOP", "COUNT"))
    sw.add_argument("--reynolds-range", nargs=3, type=float, metavar=("START", "STOP", "COUNT"))
    sw.add_argument("--beta-range", nargs=3, type=float, metavar=("START", "STOP", "COUNT"))
    sw.add_argument("--n", type=int)
    sw.add_argument("--modes-kept", type=int)
    sw.add_argument("--output-dir")
    sw.add_argument("--agree-tol", type=float)
    sw.add_argument("--quiet", action="store_true")

    pr = sub.add_parser("profiles", help="profile catalog operations")
    pr_sub = pr.add_subparsers(dest="profiles_command", required=True)
    pr_sub.add_parser("list", help="list builtin profiles")

    ce = sub.add_parser("certify", help="re-run certificates on a saved spectrum")
    ce.add_argument("--spectrum", required=True, metavar="PATH")
    return parser


def _cmd_solve(args: argparse.Namespace) -> int:
    profile = load_profile(args.profile, kappa=args.kappa)
    params = FlowParameters(alpha=args.alpha, reynolds=args.reynolds, beta=args.beta)
    result = run_single(
        profile, params, args.n, modes_kept=args.modes_kept, agree_tol=args.agree_tol
    )
    _print_case(result, profile, args.n)
    if args.save_spectrum:
        save_spectrum(args.save_spectrum, args.profile, args.kappa, params, args.n, result)
        print(f"spectrum saved to {args.save_spectrum}")
    return 2 if result.bound_violations else 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _sweep_config(args)
    manifest = run_sweep(config, quiet=args.quiet)
    if manifest["cases_failed"]:
        return 1
    return 2 if manifest["bound_violations"] else 0


def _cmd_profiles_list() -> int:
    descriptions = {
        "couette": "U = z (linear shear)",
        "poiseuille": "U = 1 - z^2 (channel)",
        "tanh_layer": "U = tanh(kappa z) (mixing layer)",
        "bickley_jet": "U = sech^2(kappa z) (jet)",
    }
    for name in builtin_names():
        print(f"{name:12s} {descriptions.get(name, '')}")
    return 0


def _cmd_certify(args: argparse.Namespace) -> int:
    profile, params, n, pairs = load_spectrum(args.spectrum)
    grid = build_grid(n)
    result = CaseResult(params=params)
    for rank, pair in enumerate(pairs, start=1):
        ef = energy_integrals(pair.phi, profile, params, grid)
        cert = make_certificate(pair, ef, profile, params)
        ident = verify_identities(pair, ef, params)
        result.modes.append(ModeRecord(rank=rank, pair=pair, certificate=cert, identity=ident))
    _print_case(result, profile, n)
    return 2 if result.bound_violations else 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "profiles":
            return _cmd_profiles_list()
        if args.command == "certify":
            return _cmd_certify(args)
        parser.error(f"unknown command {args.command!r}")
    except (UnknownProfileError, EigensolverError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
