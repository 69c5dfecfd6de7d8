"""Command-line front end.

Every file written starts with a ``#`` metadata block (tool version, the full
run configuration and content hashes of the input files). Exit codes: 0 success,
1 numerical failure, 2 usage or input error, 3 simulation abort.
"""

from __future__ import annotations

import os
from pathlib import Path

import click

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE, EXIT_ABORT = 0, 1, 2, 3
_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")


def _apply_thread_cap() -> None:
    # only effective before numpy first loads BLAS
    cap = os.environ.get("SBF_THREADS")
    if cap:
        for var in _THREAD_VARS:
            os.environ[var] = cap


_apply_thread_cap()


class InputError(click.ClickException):
    exit_code = EXIT_USAGE


class NumericalFailure(click.ClickException):
    exit_code = EXIT_NUMERIC


def _read(path, loader, what):
    from .errors import GeometryError

    try:
        return loader(Path(path).read_text())
    except (OSError, GeometryError) as exc:
        raise InputError(f"cannot read {what} {path}: {exc}") from exc


def _read_curve(path):
    from .geometry import FourierCurve

    return _read(path, FourierCurve.from_json, "curve")


def _read_field(path):
    from .fields import PeriodicVectorField

    return _read(path, PeriodicVectorField.from_json, "field")


def _meta(ctx: click.Context, config: dict, inputs=()) -> list[str]:
    from .io import input_hashes, metadata_lines

    return metadata_lines(ctx.command_path, config, input_hashes(inputs))


def _write_json(path, obj, meta_lines) -> None:
    from .io import dump_json

    Path(path).write_text(dump_json(obj, {"header": meta_lines}) + "\n")


def _field_rows(field):
    return [[s, *v] for s, v in zip(field.s, field.values)]


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact", prog_name="sbf", message="%(prog)s %(version)s")
def main():
    """Slender-body boundary operators, symbols and filament evolution."""


# ---------------------------------------------------------------- multipliers

@main.command()
@click.option("--eps", type=float, required=True, help="Tube radius over filament length.")
@click.option("--kmax", type=click.IntRange(min=1), required=True)
@click.option("--zero-mode", type=click.Choice(["nearest", "reject"]), default="nearest",
              show_default=True, help="Value stored in the k = 0 row (nearest: |k| = 1 value).")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.pass_context
def multipliers(ctx, eps, kmax, zero_mode, out):
    """Tabulate DtN eigenvalues next to their boundary-integral reconstruction."""
    import numpy as np

    from .errors import DomainError
    from .io import write_csv
    from .multipliers import build_table

    if not eps > 0:
        raise InputError("--eps must be positive")
    try:
        cols = [build_table(name, eps, kmax, zero_mode).values
                for name in ("dtn_t", "dtn_n", "ntd_t", "ntd_n", "bi_t", "bi_n")]
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    k = np.arange(-kmax, kmax + 1)
    z = 2 * np.pi * eps * np.abs(k)
    rows = zip(k.tolist(), z, *cols)
    config = {"eps": eps, "kmax": kmax, "zero_mode": zero_mode}
    header = ["k", "z", "m_t_inv", "m_n_inv", "m_t", "m_n", "bi_t", "bi_n"]
    write_csv(out, header, rows, _meta(ctx, config))
    click.echo(f"wrote {2 * kmax + 1} rows to {out}")


# ---------------------------------------------------------------- verify

@main.command()
@click.option("--suite", type=click.Choice(["bessel", "symbols", "quadrature", "identities",
                                            "geometry", "all"]), default="all", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Also write the report here (stdout always gets it).")
@click.pass_context
def verify(ctx, suite, out):
    """Run self-check suites; exit 0 iff every check passes."""
    from .io import dump_json
    from .verify import run_suite

    report = run_suite(suite)
    click.echo(dump_json(report))
    if out:
        _write_json(out, report, _meta(ctx, {"suite": suite}))
    ctx.exit(EXIT_OK if report["pass"] else EXIT_NUMERIC)


# ---------------------------------------------------------------- static solves

def _static_options(func):
    opts = [
        click.option("--curve", type=click.Path(), default=None,
                     help="Curve JSON; omit for the straight periodic tube."),
        click.option("--eps", type=float, default=None,
                     help="Radius ratio (straight tube, or override the curve's)."),
        click.option("--ntheta", type=click.IntRange(min=4), default=8, show_default=True),
        click.option("--zero-mode", type=click.Choice(["reject", "drop", "nearest"]),
                     default="reject", show_default=True,
                     help="Straight tube only: treatment of the mean mode."),
        click.option("--out", type=click.Path(dir_okay=False), required=True,
                     help="CSV of the solved field; the report goes next to it as .json."),
    ]
    for opt in reversed(opts):
        func = opt(func)
    return func


def _static_solve(ctx, kind, data_path, curve, eps, ntheta, zero_mode, out):
    import numpy as np

    from .bvp import assemble_dtn_system, dtn_curved, dtn_straight, ntd_curved, ntd_straight
    from .errors import DomainError, GeometryError, SolverError, ZeroModeError
    from .geometry import surface_grid
    from .io import write_csv

    data = _read_field(data_path)
    config = {"kind": kind, "curve": curve, "eps": eps, "ntheta": ntheta,
              "zero_mode": zero_mode, "ns": data.n}
    inputs = [data_path] + ([curve] if curve else [])
    report = {"kind": kind, "ns": data.n}
    try:
        if curve is None:
            if eps is None:
                raise InputError("--eps is required for the straight tube")
            solve = dtn_straight if kind == "dtn" else ntd_straight
            result = solve(eps, data, zero_mode=zero_mode)
            report.update(geometry="straight", eps=eps, residual=0.0)
        else:
            c = _read_curve(curve)
            if eps is not None:
                c = c.with_eps(eps)
            grid = surface_grid(c, data.n, ntheta)
            system = assemble_dtn_system(grid)
            result, w = (dtn_curved if kind == "dtn" else ntd_curved)(system, data)
            res = float(system.meta.get("last_residual", 0.0))
            report.update(geometry="curve", eps=c.eps, ntheta=ntheta, residual=res,
                          eta=system.eta, regularization=system.meta.get("regularization"),
                          normal_moment=float(system.meta.get("normal_moment", 0.0)),
                          traction_max=float(np.max(np.abs(w.values))))
            if res > 1e-6:
                raise SolverError("residual above tolerance", residual=res)
    except (ZeroModeError, DomainError, GeometryError) as exc:
        raise InputError(str(exc)) from exc
    except SolverError as exc:
        report.update(status="fail", error=str(exc), residual=exc.residual)
        _write_json(Path(out).with_suffix(".json"), report, _meta(ctx, config, inputs))
        raise NumericalFailure(f"{exc} (residual {exc.residual})") from exc
    report["status"] = "ok"
    report["result_inf_norm"] = result.norm_inf()
    meta = _meta(ctx, config, inputs)
    names = ["fx", "fy", "fz"] if kind == "dtn" else ["vx", "vy", "vz"]
    write_csv(out, ["s", *names], _field_rows(result), meta)
    _write_json(Path(out).with_suffix(".json"), report, meta)
    click.echo(f"wrote {out}")


@main.command()
@click.option("--velocity", type=click.Path(), required=True, help="Velocity field JSON.")
@_static_options
@click.pass_context
def dtn(ctx, velocity, curve, eps, ntheta, zero_mode, out):
    """Force per unit length for a prescribed filament velocity."""
    _static_solve(ctx, "dtn", velocity, curve, eps, ntheta, zero_mode, out)


@main.command()
@click.option("--force", type=click.Path(), required=True, help="Force field JSON.")
@_static_options
@click.pass_context
def ntd(ctx, force, curve, eps, ntheta, zero_mode, out):
    """Filament velocity for a prescribed force per unit length."""
    _static_solve(ctx, "ntd", force, curve, eps, ntheta, zero_mode, out)


# ---------------------------------------------------------------- evolve

_DIAG_COLUMNS = ("lambda", "energy", "r_eff", "kappa_star", "chord_arc", "tail_energy")


@main.command()
@click.option("--curve", type=click.Path(), required=True, help="Initial curve JSON.")
@click.option("--eps", type=float, default=None, help="Override the curve's radius ratio.")
@click.option("--dt", type=float, required=True)
@click.option("--steps", type=click.IntRange(min=0), required=True)
@click.option("--variant", type=click.Choice(["frame-spectral", "cartesian"]),
              default="frame-spectral", show_default=True)
@click.option("--correction-every", type=click.IntRange(min=0), default=0, show_default=True,
              help="Refresh the curved correction every M steps (0: main part only).")
@click.option("--zero-mode", type=click.Choice(["nearest", "drop"]), default="nearest",
              show_default=True)
@click.option("--modes", type=click.IntRange(min=1), default=None)
@click.option("--ntheta", type=click.IntRange(min=4), default=8, show_default=True)
@click.option("--snapshot-every", type=click.IntRange(min=0), default=0, show_default=True,
              help="Write the curve every M steps (0: initial and final only).")
@click.option("--reparameterize", is_flag=True,
              help="Rescale to unit length and arclength parameterization first.")
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
@click.pass_context
def evolve(ctx, curve, eps, dt, steps, variant, correction_every, zero_mode, modes, ntheta,
           snapshot_every, reparameterize, out_dir):
    """Advance a closed filament in time; writes diagnostics.csv and snapshots."""
    from .errors import DomainError, GeometryError
    from .evolution import SchemeConfig
    from .evolution import evolve as run
    from .io import write_csv

    initial = _read_curve(curve)
    if eps is not None:
        initial = initial.with_eps(eps)
    config = {"curve": curve, "eps": initial.eps, "dt": dt, "steps": steps, "variant": variant,
              "correction_every": correction_every, "zero_mode": zero_mode, "modes": modes,
              "ntheta": ntheta, "snapshot_every": snapshot_every,
              "reparameterize": reparameterize}
    try:
        cfg = SchemeConfig(variant=variant, dt=dt, steps=steps, correction_every=correction_every,
                           zero_mode=zero_mode, modes=modes, ntheta=ntheta)
        traj = run(initial, cfg, reparameterize=reparameterize)
    except (DomainError, GeometryError) as exc:
        raise InputError(str(exc)) from exc

    out = Path(out_dir)
    (out / "snapshots").mkdir(parents=True, exist_ok=True)
    meta = _meta(ctx, config, [curve])
    rows = []
    for i, st in enumerate(traj.states):
        d = st.diagnostics
        rows.append([i, st.t, *(d.get(c, float("nan")) for c in _DIAG_COLUMNS)])
    write_csv(out / "diagnostics.csv", ["step", "t", *_DIAG_COLUMNS], rows, meta)
    last = len(traj.states) - 1
    for i, st in enumerate(traj.states):
        if i in (0, last) or (snapshot_every and i % snapshot_every == 0):
            (out / "snapshots" / f"step_{i:07d}.json").write_text(st.curve.to_json() + "\n")
    (out / "final.json").write_text(traj.final.curve.to_json() + "\n")
    report = {"steps_completed": last, "t_final": traj.final.t, "lambda_final": traj.final.lam,
              "abort_reason": traj.abort_reason}
    _write_json(out / "report.json", report, meta)
    if traj.abort_reason:
        click.echo(f"aborted at step {last}: {traj.abort_reason}", err=True)
        ctx.exit(EXIT_ABORT)
    click.echo(f"completed {last} steps, lambda = {traj.final.lam:.12g}")


# ---------------------------------------------------------------- converge

def _study_quadrature(eps):
    from .verify import straight_quadrature_errors

    rows, prev = [], None
    for ns, nt in ((64, 8), (128, 16), (256, 32)):
        err = max(straight_quadrature_errors(eps=eps, ns=ns, ntheta=nt).values())
        rows.append([ns, nt, err, float("nan") if prev is None else prev / err])
        prev = err
    return ["ns", "ntheta", "error", "ratio"], rows


def _study_decomposition(eps_list):
    import numpy as np

    from .bvp import decomposition_error
    from .geometry import FourierCurve, rescale_to_unit_length

    curve = rescale_to_unit_length(FourierCurve.perturbed_circle(0.05, 3, eps=max(eps_list)))

    def v(s):
        w = 2 * np.pi * s
        return np.stack([np.sin(w), np.cos(2 * w), 0.5 * np.sin(w) + 0.3 * np.cos(w)], axis=1)

    rows = [[r.eps, r.ns, r.ntheta, r.error, r.ratio, r.relative, r.mean_part]
            for r in decomposition_error(curve, eps_list, v)]
    return ["eps", "ns", "ntheta", "error", "ratio", "relative", "mean_part"], rows


def _study_dt(eps, dt, steps):
    """Self-convergence in dt of the main part on a perturbed circle at fixed final time."""
    import numpy as np

    from .evolution import SchemeConfig
    from .evolution import evolve as run
    from .geometry import FourierCurve, rescale_to_unit_length

    curve = rescale_to_unit_length(FourierCurve.perturbed_circle(0.05, 3, eps=eps))
    finals = []
    for level in range(4):
        cfg = SchemeConfig(dt=dt / 2**level, steps=steps * 2**level, diagnostics_every=10**9)
        finals.append(run(curve, cfg).final.curve.samples(64))
    rows, prev = [], None
    for level in range(3):
        err = float(np.max(np.abs(finals[level] - finals[-1])))
        rows.append([dt / 2**level, steps * 2**level, err,
                     float("nan") if prev is None else prev / err])
        prev = err
    return ["dt", "steps", "error", "ratio"], rows


@main.command()
@click.option("--study", type=click.Choice(["quadrature", "decomposition", "dt"]), required=True)
@click.option("--eps", type=float, multiple=True,
              help="Radius ratio; repeat for the decomposition study (default 0.08 0.04 0.02).")
@click.option("--dt", type=float, default=1e-5, show_default=True, help="dt study: coarsest step.")
@click.option("--steps", type=click.IntRange(min=1), default=50, show_default=True,
              help="dt study: steps at the coarsest dt.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.pass_context
def converge(ctx, study, eps, dt, steps, out):
    """Refinement studies; writes (resolution or eps, error, ratio) rows."""
    from .errors import DomainError, GeometryError
    from .io import write_csv

    eps = list(eps)
    try:
        if study == "quadrature":
            header, rows = _study_quadrature(eps[0] if eps else 0.05)
        elif study == "decomposition":
            header, rows = _study_decomposition(eps or [0.08, 0.04, 0.02])
        else:
            header, rows = _study_dt(eps[0] if eps else 0.05, dt, steps)
    except (DomainError, GeometryError) as exc:
        raise InputError(str(exc)) from exc
    config = {"study": study, "eps": eps, "dt": dt, "steps": steps}
    write_csv(out, header, rows, _meta(ctx, config))
    click.echo(f"wrote {len(rows)} rows to {out}")


if __name__ == "__main__":  # pragma: no cover
    main()
