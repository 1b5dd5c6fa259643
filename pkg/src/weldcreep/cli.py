"""Batch front-end: parse a TOML problem file, run a pipeline stage, and
write CSV profiles plus a run summary.

Stages
------
baseline     unperturbed stress profile across the wall
jumps        closed-form interface jumps over the wall radii
ritz         series solution of the linear correction, profiles along lines
kantorovich  separated solution: constants, root, profiles
compare      ritz and kantorovich profiles side by side
solve        direct nonlinear solution for each requested s
sweep        nonlinear vs first-order error profiles for each requested s

Profile CSVs share the schema
``r,z,sigma_r,sigma_theta,sigma_z,sigma_rz,source`` with floats printed to
nine significant digits; the jumps stage writes
``r,jump_sigma_r,jump_sigma_theta,jump_u_r``.  Identical inputs produce
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .core import MaterialLayup, PipeConfig, normalize_layup
from .baseline import (
    baseline_coefficients,
    baseline_stress,
    displacement_jump,
    stress_jump,
)
from .stressfn import enumerate_basis, grid_for_basis
from .ritz import solve_linear_correction
from .kantorovich import (
    characteristic_roots,
    compute_constants,
    reconstruct_stress,
    solve_bvp,
)
from .nonlinear import NonlinearProblem, perturbation_error, solve_nonlinear

__all__ = ["RunManifest", "parse_config", "run_stage", "main"]

STAGES = ("baseline", "jumps", "ritz", "kantorovich", "compare", "solve", "sweep")

_PIPE_KEYS = {"r_i", "r_o", "H", "p", "n"}
_MATERIAL_KEYS = {"s", "interface", "coefficients", "interfaces"}
_RUN_KEYS = {"nr", "nz", "disc_basis", "quad_order", "line_r", "z_samples", "s_values"}


@dataclass(frozen=True)
class RunManifest:
    """Effective run settings after defaults and flag overrides."""

    stage: str = "baseline"
    out_dir: str = "out"
    nr: int = 25
    nz: int = 25
    disc_basis: bool = True
    quad_order: int = 12
    line_r: tuple[float, ...] = (1.5,)
    z_samples: int = 401
    s_values: tuple[float, ...] = (0.1, 0.5, 0.9)


def parse_config(text: str) -> tuple[PipeConfig, RunManifest]:
    """Parse the TOML problem definition.

    Unknown keys raise with the full list of offenders; missing or invalid
    fields raise naming the field.  Returns the pipe definition and a
    manifest carrying the file's run defaults.
    """
    data = tomllib.loads(text)

    unknown = [k for k in data if k not in ("pipe", "material", "run")]
    pipe = data.get("pipe", {})
    material = data.get("material", {})
    run = data.get("run", {})
    unknown += [f"pipe.{k}" for k in pipe if k not in _PIPE_KEYS]
    unknown += [f"material.{k}" for k in material if k not in _MATERIAL_KEYS]
    unknown += [f"run.{k}" for k in run if k not in _RUN_KEYS]
    if unknown:
        raise ValueError(f"unknown configuration keys: {', '.join(sorted(unknown))}")

    for key in ("r_i", "r_o", "H", "p", "n"):
        if key not in pipe:
            raise ValueError(f"missing required key: pipe.{key}")

    if "coefficients" in material or "interfaces" in material:
        if "s" in material or "interface" in material:
            raise ValueError(
                "material: give either (s, interface) or "
                "(coefficients, interfaces), not both"
            )
        try:
            layup = MaterialLayup(
                coefficients=tuple(material.get("coefficients", ())),
                interfaces=tuple(material.get("interfaces", ())),
            )
        except ValueError as exc:
            raise ValueError(f"material: {exc}") from exc
    elif "s" in material or "interface" in material:
        if "s" not in material:
            raise ValueError("missing required key: material.s")
        if "interface" not in material:
            raise ValueError("missing required key: material.interface")
        layup = MaterialLayup(
            coefficients=(1.0 - float(material["s"]), 1.0),
            interfaces=(float(material["interface"]),),
        )
    else:
        layup = MaterialLayup(coefficients=(1.0,), interfaces=())

    try:
        config = PipeConfig(
            r_i=float(pipe["r_i"]), r_o=float(pipe["r_o"]), H=float(pipe["H"]),
            p=float(pipe["p"]), n=float(pipe["n"]), layup=layup,
        )
    except ValueError as exc:
        raise ValueError(f"pipe: {exc}") from exc

    manifest = RunManifest(
        nr=int(run.get("nr", 25)),
        nz=int(run.get("nz", 25)),
        disc_basis=bool(run.get("disc_basis", True)),
        quad_order=int(run.get("quad_order", 12)),
        line_r=tuple(float(x) for x in run.get("line_r", (1.5,))),
        z_samples=int(run.get("z_samples", 401)),
        s_values=tuple(float(x) for x in run.get("s_values", (0.1, 0.5, 0.9))),
    )
    return config, manifest


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _profile_rows(r: float, z: np.ndarray, sig: np.ndarray, source: str):
    for zi, row in zip(z, sig):
        yield (float(r), float(zi), float(row[0]), float(row[1]),
               float(row[2]), float(row[3]), source)


def _echo_config(config: PipeConfig, manifest: RunManifest) -> list[str]:
    lines = ["[effective configuration]"]
    lines.append(f"r_i = {_fmt(config.r_i)}")
    lines.append(f"r_o = {_fmt(config.r_o)}")
    lines.append(f"H = {_fmt(config.H)}")
    lines.append(f"p = {_fmt(config.p)}")
    lines.append(f"n = {_fmt(config.n)}")
    lines.append(f"layup coefficients = {list(config.layup.coefficients)}")
    lines.append(f"layup interfaces = {list(config.layup.interfaces)}")
    norm = normalize_layup(config.layup)
    lines.append(f"normalized s = {_fmt(norm.s)}")
    lines.append(f"normalized alphas = {list(norm.alphas)}")
    if norm.s_is_large:
        lines.append("warning: |s| > 0.5, first-order expansion degrades in this regime")
    for name in ("stage", "out_dir", "nr", "nz", "disc_basis", "quad_order",
                 "line_r", "z_samples", "s_values"):
        lines.append(f"{name} = {getattr(manifest, name)}")
    return lines


def _z_grid(config: PipeConfig, manifest: RunManifest) -> np.ndarray:
    return np.linspace(0.0, config.H, manifest.z_samples)


def _linear_correction(config: PipeConfig, manifest: RunManifest):
    basis = enumerate_basis(config, manifest.nr, manifest.nz,
                            include_discontinuous=manifest.disc_basis)
    grid = grid_for_basis(config, manifest.nr, order=manifest.quad_order)
    return basis, grid, solve_linear_correction(config, basis, grid)


def run_stage(config: PipeConfig, manifest: RunManifest) -> int:
    """Run one stage; writes artifacts into the output directory and
    returns a process exit status (0 on success)."""
    out = Path(manifest.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = _echo_config(config, manifest)
    summary.append("")
    summary.append(f"[stage {manifest.stage}]")
    try:
        _dispatch(config, manifest, out, summary)
    except Exception as exc:  # propagate as status + diagnostic text
        summary.append(f"error: {exc}")
        (out / "run_summary.txt").write_text("\n".join(summary) + "\n")
        print(f"error: {exc}", file=sys.stderr)
        return 1
    (out / "run_summary.txt").write_text("\n".join(summary) + "\n")
    return 0


_PROFILE_HEADER = ["r", "z", "sigma_r", "sigma_theta", "sigma_z", "sigma_rz", "source"]


def _dispatch(config: PipeConfig, manifest: RunManifest, out: Path,
              summary: list[str]) -> None:
    stage = manifest.stage
    coef = baseline_coefficients(config)
    summary.append(f"a = {_fmt(coef.a)}")
    summary.append(f"a_r = {_fmt(coef.a_r)}")
    summary.append(f"a_theta = {_fmt(coef.a_theta)}")
    summary.append(f"a_z = {_fmt(coef.a_z)}")

    if stage == "baseline":
        radii = np.linspace(config.r_i, config.r_o, 101)
        sig = baseline_stress(config, radii)
        rows = [
            (float(r), 0.0, float(s[0]), float(s[1]), float(s[2]), float(s[3]),
             "baseline")
            for r, s in zip(radii, sig)
        ]
        _write_csv(out / "baseline.csv", _PROFILE_HEADER, rows)
        return

    if stage == "jumps":
        radii = np.linspace(config.r_i, config.r_o, 50)
        jr, jt = stress_jump(config, radii)
        ju = displacement_jump(config, radii)
        rows = [
            (float(r), float(a), float(b), float(u))
            for r, a, b, u in zip(radii, jr, jt, ju)
        ]
        _write_csv(out / "jumps.csv",
                   ["r", "jump_sigma_r", "jump_sigma_theta", "jump_u_r"], rows)
        return

    if stage in ("ritz", "compare"):
        basis, grid, correction = _linear_correction(config, manifest)
        summary.append(f"basis size = {len(basis)}")
        for key, val in sorted(correction.diagnostics.items()):
            summary.append(f"solver {key} = {val}")
        z = _z_grid(config, manifest)
        rows = []
        for r_line in manifest.line_r:
            prof = correction.profile(r_line, z)
            rows.extend(_profile_rows(r_line, z, prof, "ritz"))
        if stage == "ritz":
            _write_csv(out / "ritz.csv", _PROFILE_HEADER, rows)
            return
        # compare adds the separated solution and agreement statistics
        constants = compute_constants(config)
        bvp = solve_bvp(constants, config)
        _append_constants(summary, constants, bvp)
        for r_line in manifest.line_r:
            prof = reconstruct_stress(bvp, np.array([r_line]), z)[0]
            rows.extend(_profile_rows(r_line, z, prof, "kantorovich"))
            ritz_prof = correction.profile(r_line, z)
            gap = np.abs(prof[:, 3] - ritz_prof[:, 3]).max()
            scale = np.abs(ritz_prof[:, 3]).max()
            summary.append(
                f"shear agreement at r = {_fmt(r_line)}: max diff {_fmt(gap)} "
                f"({_fmt(100.0 * gap / scale)}% of the shear peak)"
            )
        _write_csv(out / "compare.csv", _PROFILE_HEADER, rows)
        return

    if stage == "kantorovich":
        constants = compute_constants(config)
        bvp = solve_bvp(constants, config)
        _append_constants(summary, constants, bvp)
        z = _z_grid(config, manifest)
        rows = []
        for r_line in manifest.line_r:
            prof = reconstruct_stress(bvp, np.array([r_line]), z)[0]
            rows.extend(_profile_rows(r_line, z, prof, "kantorovich"))
        _write_csv(out / "kantorovich.csv", _PROFILE_HEADER, rows)
        return

    if stage in ("solve", "sweep"):
        basis, grid, correction = _linear_correction(config, manifest)
        summary.append(f"basis size = {len(basis)}")
        z = _z_grid(config, manifest)
        for s in manifest.s_values:
            problem = NonlinearProblem(config=config, basis=tuple(basis),
                                       grid=grid, s=s)
            warm = s * correction.coefficients
            solution = solve_nonlinear(problem, initial=warm)
            diag = solution.diagnostics
            summary.append(
                f"s = {_fmt(s)}: newton iterations = {diag['iterations']}, "
                f"final gradient = {_fmt(diag['gradient_norms'][-1])}, "
                f"fallback steps = {diag['fallback_steps']}"
            )
            rows = []
            for r_line in manifest.line_r:
                report = perturbation_error(config, s, correction, solution,
                                            r_line, z)
                rows.extend(_profile_rows(r_line, z, report.nonlinear, "nonlinear"))
                if stage == "sweep":
                    rows.extend(
                        _profile_rows(r_line, z, report.first_order, "firstorder")
                    )
                    comp = report.max_abs
                    summary.append(
                        f"s = {_fmt(s)}, r = {_fmt(r_line)}: expansion error "
                        f"max |d sigma| (r, theta, z, rz) = "
                        f"{', '.join(_fmt(v) for v in comp)}"
                    )
            name = f"{stage}_s{_fmt(s)}.csv"
            _write_csv(out / name, _PROFILE_HEADER, rows)
        return

    raise ValueError(f"unknown stage: {stage}")


def _append_constants(summary: list[str], constants, bvp) -> None:
    for name in ("a1", "a2", "a3", "b1", "b2", "b3", "b4", "b5",
                 "k1", "k2", "k3", "e1", "e2", "e3", "g1", "g2"):
        summary.append(f"{name} = {_fmt(getattr(constants, name))}")
    _, lam = characteristic_roots(constants.k1, constants.k2, constants.k3)
    summary.append(f"lambda = {_fmt(lam.real)} + {_fmt(lam.imag)}i")
    for key, val in sorted(bvp.diagnostics.items()):
        summary.append(f"bvp {key} = {val}")


def _comma_floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="weldcreep",
        description="Steady-state creep stress analysis of welded pipes",
    )
    sub = parser.add_subparsers(dest="stage", required=True)
    for stage in STAGES:
        sp = sub.add_parser(stage)
        sp.add_argument("--config", required=True, help="TOML problem file")
        sp.add_argument("--out", default="out", help="output directory")
        sp.add_argument("--nr", type=int, help="radial mode count")
        sp.add_argument("--nz", type=int, help="axial mode count")
        sp.add_argument("--disc-basis", choices=("on", "off"),
                        help="include discontinuous members")
        sp.add_argument("--quad-order", type=int, help="Gauss points per cell")
        sp.add_argument("--line-r", type=_comma_floats,
                        help="comma list of sampling radii")
        sp.add_argument("--s", type=_comma_floats, dest="s_values",
                        help="comma list of contrast parameters")
    args = parser.parse_args(argv)

    try:
        config, manifest = parse_config(Path(args.config).read_text())
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    manifest = replace(manifest, stage=args.stage, out_dir=args.out)
    if args.nr is not None:
        manifest = replace(manifest, nr=args.nr)
    if args.nz is not None:
        manifest = replace(manifest, nz=args.nz)
    if args.disc_basis is not None:
        manifest = replace(manifest, disc_basis=args.disc_basis == "on")
    if args.quad_order is not None:
        manifest = replace(manifest, quad_order=args.quad_order)
    if args.line_r is not None:
        manifest = replace(manifest, line_r=args.line_r)
    if args.s_values is not None:
        manifest = replace(manifest, s_values=args.s_values)

    return run_stage(config, manifest)


if __name__ == "__main__":
    raise SystemExit(main())
