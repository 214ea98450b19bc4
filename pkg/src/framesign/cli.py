"""Command-line front end.

Every subcommand writes CSV/JSON files into ``--out`` and, with ``--plot``,
PNG figures next to them. Exit status is 0 on success, 2 on invalid input and
3 on numerical failure.
"""

import math
import sys
from pathlib import Path

import click
import numpy as np

from . import bases, counterexamples, frames, jacobi, signmass
from .errors import Exhausted, NumericalError, ValidationError
from .grid import make_grid
from .io import parse_floats, parse_interval, parse_range, write_csv, write_json

EXIT_INVALID = 2
EXIT_NUMERICAL = 3

SYSTEMS = bases.KINDS + ("dyadic",)


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ValidationError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(EXIT_INVALID)
        except NumericalError as exc:
            click.echo(f"numerical failure: {exc}", err=True)
            ctx.exit(EXIT_NUMERICAL)


@click.group(cls=_Group, context_settings={"help_option_names": ["--help"]})
def main():
    """Numerical experiments on sign behavior of frames and orthonormal systems."""


def _out_option(f):
    f = click.option("--plot", is_flag=True, help="Also render PNG figures (needs matplotlib).")(f)
    return click.option(
        "--out", "out", required=True, type=click.Path(file_okay=False, path_type=Path), help="Output directory."
    )(f)


def _config(command, **params):
    return {"command": command, **params}


def _plot(out, name, *args, **kwargs):
    from .plotting import line_plot

    line_plot(out / name, *args, **kwargs)


def _szwarc_rc(bn, B, length):
    return jacobi.szwarc_coefficients(jacobi.diagonal_sequence(bn, length), B)


@main.command()
@click.option("--bn", default="linear", show_default=True, help="Diagonal: linear, nlog or power:g.")
@click.option("--B", "B", type=float, default=0.5, show_default=True, help="Szwarc parameter in (0, 1).")
@click.option("--nmax", type=int, default=2000, show_default=True)
@click.option("--x", "xrange", default="-2:2:5", show_default=True, help="Points as a:b:count.")
@_out_option
def szwarc(bn, B, nmax, xrange, out, plot):
    """Szwarc recurrence: envelope of b_n p_n(x)^2 and Mate-Nevai traces."""
    xs = parse_range(xrange)
    cfg = _config("szwarc", bn=bn, B=B, nmax=nmax, x=xrange)
    rc = _szwarc_rc(bn, B, nmax + 2)
    env = jacobi.bound_envelope(rc, xs, nmax)
    write_csv(out / "envelope.csv", ["x", "c_hat", "c_hat_last_half"], zip(env.xs, env.c_hat, env.tail_max), cfg)

    reg = jacobi.regularity_report(rc)
    points = []
    for x in xs:
        tr = jacobi.mate_nevai(rc, float(x), nmax)
        ident = jacobi.identity_report(tr, rc)
        write_csv(out / f"mate_nevai_x{x:g}.csv", ["n", "Lambda", "A", "Delta"], tr.rows(), {**cfg, "at": float(x)})
        points.append(
            {
                "x": float(x),
                "start_index": tr.start_index,
                "f_estimate": tr.f_estimate,
                "converged": tr.converged,
                "window_deviation": tr.window_deviation,
                "window_fraction": tr.window_fraction,
                "tolerance": tr.tolerance,
                "recurrence_residual": ident.recurrence,
                "square_form_1_residual": ident.square_form_1,
                "square_form_2_residual": ident.square_form_2,
            }
        )
        if plot:
            n = np.arange(tr.start_index + 1, nmax)
            _plot(out, f"delta_x{x:g}.png", n, {"Delta_n": tr.delta_seq}, "n", "Delta_n", f"x = {x:g}")
    write_json(
        out / "regularity.json",
        {
            "length": reg.length,
            "carleman_sum": reg.carleman_sum,
            "variation": reg.variation,
            "last_b_ratio": reg.last_b_ratio,
            "last_a2_over_bb": reg.last_a2_over_bb,
            "target_a2_over_bb": reg.target_a2_over_bb,
            "warnings": list(reg.warnings),
            "points": points,
        },
        cfg,
    )
    if plot:
        _plot(out, "envelope.png", env.xs, {"C_hat": env.c_hat}, "x", "max b_n p_n(x)^2", marker="o")


@main.command()
@click.option("--alpha", type=float, default=2.0, show_default=True, help="Weights w_I = |I|^alpha.")
@click.option("--depth", type=int, default=12, show_default=True)
@_out_option
def carleson(alpha, depth, out, plot):
    """Dyadic testing constant for power weights."""
    rep = counterexamples.carleson_constant(counterexamples.power_weight(alpha), depth)
    cfg = _config("carleson", alpha=alpha, depth=depth)
    limit = 2 ** (alpha - 1) / (2 ** (alpha - 1) - 1) if alpha > 1 else math.inf
    write_json(out / "carleson.json", {**rep.to_dict(), "infinite_depth_limit": limit}, cfg)
    if plot:
        _plot(out, "carleson.png", np.arange(depth + 1), {"level max": rep.per_level_trace}, "level", "testing ratio")


@main.command("dyadic-bessel")
@click.option("--max-depth", type=int, default=10, show_default=True)
@_out_option
def dyadic_bessel(max_depth, out, plot):
    """Top Gram eigenvalue of the dyadic indicator system by depth."""
    trace = counterexamples.dyadic_bessel_trace(max_depth)
    cfg = _config("dyadic-bessel", max_depth=max_depth)
    rows = [(L, lam, 2 - 2.0**-L) for L, lam in trace]
    write_csv(out / "dyadic_bessel.csv", ["depth", "lambda_max", "two_minus_2_pow_minus_depth"], rows, cfg)
    if plot:
        d, lam, ref = zip(*rows)
        _plot(out, "dyadic_bessel.png", d, {"lambda_max": lam, "2 - 2^-L": ref}, "depth", "lambda_max", marker="o")


def _dilation(depth, headroom, seed, n_random):
    g1 = make_grid(0.0, 1.0, 2 ** (depth + 1))
    g2 = make_grid(0.0, 2.0, 2 ** (depth + 2))
    v = counterexamples.dyadic_system(depth, g1)
    scale = None
    if headroom is not None:
        if not 0 < headroom < 1:
            raise ValidationError("headroom must lie in (0, 1)")
        top = float(np.linalg.eigvalsh(frames.gram_matrix(v))[-1])
        scale = headroom / math.sqrt(top)
    return v, counterexamples.dilation_basis(v, g2, scale=scale, n_random=n_random, seed=seed)


def _dilation_options(f):
    f = click.option("--n-random", type=int, default=100, show_default=True)(f)
    f = click.option("--seed", type=int, default=0, show_default=True)(f)
    f = click.option("--headroom", type=float, default=None, help="scale * sqrt(lambda_max); default 0.6.")(f)
    return click.option("--depth", type=int, default=6, show_default=True, help="Dyadic depth of the input.")(f)


@main.command()
@_dilation_options
@_out_option
def dilation(depth, headroom, seed, n_random, out, plot):
    """Orthonormal dilation of the scaled dyadic system onto (0, 2)."""
    v, db = _dilation(depth, headroom, seed, n_random)
    cfg = _config("dilation", depth=depth, headroom=headroom, seed=seed, n_random=n_random)
    restr = db.system.values[db.even][:, db.E]
    write_json(
        out / "dilation.json",
        {
            "members": len(db.system),
            "even_members": db.n_even,
            "scale": db.scale,
            "isometry_defect": db.isometry_defect,
            "gram_defect": db.gram_defect,
            "restriction_exact": bool(np.array_equal(restr, db.scale * v.values)),
        },
        cfg,
    )
    if plot:
        sp = signmass.partial_mass(db.system.take(db.even), 2.0)
        x = db.system.grid.points
        _plot(out, "dilation_even_mass.png", x, {"plus": sp.plus_mass[-1], "minus": sp.minus_mass[-1]}, "x", "mass")


@main.command()
@_dilation_options
@click.option("--targets", default="0.5,0.25,0.125", show_default=True, help="Decreasing ratio targets.")
@_out_option
def reorder(depth, headroom, seed, n_random, targets, out, plot):
    """Reorder the dilation basis so negative mass on (0, 1) stays below targets."""
    tlist = parse_floats(targets)
    _, db = _dilation(depth, headroom, seed, n_random)
    cfg = _config("reorder", depth=depth, headroom=headroom, seed=seed, n_random=n_random, targets=tlist)
    try:
        r = counterexamples.reorder_nonequidistributed(db, tlist)
    except Exhausted as exc:
        p = exc.partial or {}
        write_json(
            out / "reorder.json",
            {
                "status": "exhausted",
                "message": str(exc),
                "block_ends": list(p.get("block_ends", ())),
                "ratios": list(p.get("ratios", ())),
                "partial_order": [db.system.labels[k] for k in p.get("order", [])],
            },
            cfg,
        )
        raise
    write_json(
        out / "reorder.json",
        {
            "status": "ok",
            "targets": list(r.targets),
            "block_ends": list(r.block_ends),
            "block_positions": list(r.block_positions),
            "ratios": list(r.ratios),
            "order": list(r.system.labels),
        },
        cfg,
    )
    E = db.E
    n = np.arange(1, max(r.block_positions) + 2)
    prof = signmass.partial_mass(r.system, 2.0, n)
    ratio = np.nanmax(signmass.equidistribution_ratio(prof)[:, E], axis=1)
    write_csv(out / "ratio.csv", ["n", "max_ratio_on_E"], zip(n, ratio), cfg)
    if plot:
        _plot(out, "reorder_ratio.png", n, {"max minus/plus on E": ratio}, "members", "ratio", logy=True)


@main.command()
@click.option("--K", "K", type=int, default=16, show_default=True)
@click.option("--m", type=int, default=4096, show_default=True)
@_out_option
def cosine(K, m, out, plot):
    """Positive minimal system 1 + cos(pi k x) and its biorthogonal cosines."""
    primal, dual, rep = counterexamples.cosine_system(K, make_grid(0.0, 1.0, m))
    cfg = _config("cosine", K=K, m=m)
    write_json(out / "cosine.json", {**rep.to_dict(), "biorthogonality": rep.biorthogonality}, cfg)
    if plot:
        x = primal.grid.points
        series = {primal.labels[k]: primal.values[k] for k in range(min(K, 4))}
        _plot(out, "cosine_primal.png", x, series, "x", "u_k")


def _build_system(system, size, levels, m):
    """Named system and its default checkpoints."""
    if system in ("haar", "dyadic"):
        if levels is None:
            raise ValidationError(f"--levels is required for {system}")
        m = m or 2 ** (levels + 1)
        if system == "haar":
            sys_ = bases.haar_levels(bases.default_grid("haar", m), levels)
            cps = [1] + [2 ** (lv + 1) for lv in range(levels + 1)]
        else:
            sys_ = counterexamples.dyadic_system(levels, make_grid(0.0, 1.0, m))
            cps = [2 ** (lv + 1) - 1 for lv in range(levels + 1)]
        return sys_, cps
    if size is None:
        raise ValidationError(f"--size is required for {system}")
    if system not in bases.KINDS:
        raise ValidationError(f"unknown system {system!r}")
    grid = bases.default_grid(system, m or 4096)
    sys_ = bases.classical_system(bases.BasisKind(system, size), grid)
    cps = sorted({min(2**j, size) for j in range(int(math.log2(size)) + 2)})
    return sys_, cps


def _system_options(f):
    f = click.option("--m", type=int, default=None, help="Grid points (default depends on the system).")(f)
    f = click.option("--levels", type=int, default=None, help="Haar/dyadic depth.")(f)
    f = click.option("--size", type=int, default=None, help="Member count for trig and polynomial systems.")(f)
    return click.option("--system", type=click.Choice(SYSTEMS), required=True)(f)


@main.command("signmass")
@_system_options
@click.option("--q", type=float, default=2.0, show_default=True)
@click.option("--thresholds", default="10", show_default=True, help="Comma-separated divergence thresholds.")
@click.option("--checkpoints", default=None, help="Comma-separated member counts for the profile.")
@_out_option
def signmass_cmd(system, size, levels, m, q, thresholds, checkpoints, out, plot):
    """Partial sign masses and first divergence index per grid point."""
    thr = parse_floats(thresholds)
    sys_, cps = _build_system(system, size, levels, m)
    if checkpoints is not None:
        cps = [int(c) for c in parse_floats(checkpoints)]
    cfg = _config("signmass", system=system, size=size, levels=levels, m=sys_.grid.m, q=q, thresholds=thr, checkpoints=cps)
    prof = signmass.partial_mass(sys_, q, cps)
    write_csv(out / "profile.csv", ["x", "n", "plus", "minus", "ratio"], signmass.profile_rows(prof), cfg)
    firsts = [signmass.divergence_scan(sys_, t, q) for t in thr]
    cols = ["x"] + [f"first_n_at_{t:g}" for t in thr]
    write_csv(out / "divergence.csv", cols, zip(sys_.grid.points, *firsts), cfg)
    if plot:
        x = sys_.grid.points
        _plot(out, "signmass.png", x, {"plus": prof.plus_mass[-1], "minus": prof.minus_mass[-1]}, "x", f"mass (q={q:g})")


@main.command("frame-bounds")
@_system_options
@click.option("--duplicate", is_flag=True, help="Repeat every member once.")
@click.option("--E", "E", default=None, help="Subinterval a,b for Bessel tails.")
@_out_option
def frame_bounds_cmd(system, size, levels, m, duplicate, E, out, plot):
    """Optimal frame bounds on the span, and optional Bessel tails on E."""
    sys_, _ = _build_system(system, size, levels, m)
    if duplicate:
        sys_ = sys_.duplicated()
    cfg = _config("frame-bounds", system=system, size=size, levels=levels, m=sys_.grid.m, duplicate=duplicate, E=E)
    fb = frames.frame_bounds(sys_)
    write_json(out / "frame_bounds.json", {"lower": fb.lower, "upper": fb.upper, "subspace_dim": fb.subspace_dim}, cfg)
    if E is not None:
        mask = sys_.grid.mask(*parse_interval(E))
        if not mask.any():
            raise ValidationError(f"E = ({E}) contains no grid points")
        tails = frames.bessel_tails(sys_, mask)
        write_csv(out / "bessel_tails.csv", ["N", "tail"], enumerate(tails), cfg)
        if plot:
            _plot(out, "bessel_tails.png", np.arange(len(tails)), {"tail": tails}, "N", "Bessel tail on E")


@main.command("laguerre-gap")
@click.option("--x", "x", type=float, default=1.0, show_default=True)
@click.option("--k", "ks", default="100,200,400,800", show_default=True, help="Degrees for the gap fit.")
@click.option("--q", "qs", default="2,4.5", show_default=True, help="Exponents for power sums.")
@click.option("--kmax", type=int, default=1000, show_default=True)
@_out_option
def laguerre_gap(x, ks, qs, kmax, out, plot):
    """Laguerre asymptotic gap and power-sum growth at a point."""
    klist = [int(k) for k in parse_floats(ks)]
    qlist = parse_floats(qs)
    cfg = _config("laguerre-gap", x=x, k=klist, q=qlist, kmax=kmax)
    rows = []
    for k in klist:
        exact, asym, gap = bases.laguerre_asymptotic_gap(k, x)
        rows.append((k, exact, asym, gap, gap * k**0.75))
    write_csv(out / "laguerre_gap.csv", ["k", "exact", "asymptotic", "gap", "gap_times_k34"], rows, cfg)
    sums = {q: bases.laguerre_power_sums(x, kmax, q) for q in qlist}
    n = np.arange(kmax + 1)
    write_csv(out / "laguerre_sums.csv", ["n"] + [f"S_{q:g}" for q in qlist], zip(n, *sums.values()), cfg)
    half = kmax // 2
    slope = bases.loglog_slope(klist, [r[3] for r in rows]) if len(klist) > 1 else math.nan
    write_json(
        out / "laguerre.json",
        {
            "slope": slope,
            "increments": {f"{q:g}": float(s[kmax] - s[half]) for q, s in sums.items()},
            "increment_window": [half, kmax],
        },
        cfg,
    )
    if plot:
        _plot(out, "laguerre_gap.png", klist, {"gap": [r[3] for r in rows]}, "k", "gap", logx=True, logy=True, marker="o")
        _plot(out, "laguerre_sums.png", n, {f"q={q:g}": s for q, s in sums.items()}, "n", "partial sum", logy=True)


@main.command()
@click.option("--bn", default="linear", show_default=True)
@click.option("--B", "B", type=float, default=0.5, show_default=True)
@click.option("--N", "N", type=int, default=400, show_default=True, help="Truncation size.")
@click.option("--nmax", type=int, default=50, show_default=True)
@_out_option
def quadrature(bn, B, N, nmax, out, plot):
    """Gauss rule of the truncated Jacobi matrix and the orthonormality defect."""
    rc = _szwarc_rc(bn, B, N + 1)
    quad = jacobi.spectral_quadrature(rc, N)
    defect = jacobi.orthonormality_defect(rc, quad, nmax)
    cfg = _config("quadrature", bn=bn, B=B, N=N, nmax=nmax)
    write_json(
        out / "quadrature.json",
        {"defect": defect, "nodes": N, "underflowed_weights": int(np.sum(quad.weights == 0)), "weight_sum": float(quad.weights.sum())},
        cfg,
    )
    write_csv(out / "nodes.csv", ["node", "weight"], zip(quad.nodes, quad.weights), cfg)
    if plot:
        keep = quad.weights > 0
        _plot(out, "quadrature.png", quad.nodes[keep], {"weight": quad.weights[keep]}, "node", "weight", logy=True, marker=".")


if __name__ == "__main__":
    sys.exit(main())
