"""Command line front end over the transform and the condition checks.

Four subcommands share one scene argument and one flag set:

    torusfm transform scene.scene [--format json] [--output report]
    torusfm check     scene.scene [--tol 1e-9] [--grid 17]
    torusfm roundtrip scene.scene [--seed 7]
    torusfm curvature scene.scene

The scene argument may also name a directory, in which case every
*.scene file inside is processed in sorted order.  Reports are plain
key-value lines under --format text and a JSON object under --format
json, byte-identical across runs for fixed inputs and flags.  Exit
status is 0 on success, 1 for unreadable or malformed scenes, 2 when a
named precondition of the requested operation fails.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from .expr import (
    PI,
    ZERO,
    Verdict,
    add,
    all_zero,
    diff,
    eval_exact,
    is_zero,
    mul,
    neg,
    num,
    sub,
    to_str,
)
from .fm_absolute import SubtorusLocalSystem, transform as absolute_transform
from .fm_relative import (
    ConditionError,
    ConditionReport,
    DualBundleInput,
    RelativeSupport,
    check_C1_lagrangian,
    check_C2_C3,
    check_D_conditions,
    check_cauchy_riemann,
    check_flat,
    check_section_lagrangian,
    dual_input_from_bundle,
    fibre_of_transform,
    fibre_system,
    hodge_components,
    inverse_transform,
    relative_from_section,
    transform_nontransversal,
    transform_section,
)
from .scene import Scene, load_scene
from .torus import is_normal_to

__all__ = ["main"]


# ------------------------------------------------------------- formatting


def _vec(values) -> str:
    return "[" + ", ".join(str(v) for v in values) + "]"


def _mat(rows) -> str:
    return "[" + ", ".join(_vec(row) for row in rows) + "]"


def _evec(exprs) -> str:
    return "[" + ", ".join(to_str(e) for e in exprs) + "]"


def _emat(rows) -> str:
    return "[" + ", ".join(_evec(row) for row in rows) + "]"


def _strength(v: Verdict) -> str:
    return "proven" if v.proven else f"numerical, tol {v.tol:g}"


def _verdict_text(v: Verdict) -> str:
    return ("zero" if v.is_zero else "nonzero") + f" ({_strength(v)})"


def _condition_text(rep: ConditionReport) -> str:
    text = ("holds" if rep.holds else "fails") + f" ({_strength(rep.verdict)})"
    if rep.failures:
        text += " [" + ", ".join(rep.failures) + "]"
    return text


def _note(warnings: list, label: str, v: Verdict) -> None:
    if not v.proven:
        warnings.append(f"{label} decided numerically (tol {v.tol:g})")


def _equality(labelled, tol, grid, warnings, key) -> str:
    """Summarize entrywise zero tests of differences as one report value."""
    verdicts = []
    failures = []
    for label, e in labelled:
        v = is_zero(e, tol, grid)
        verdicts.append(v)
        if not v.is_zero:
            failures.append(label)
    total = all_zero(verdicts)
    _note(warnings, key, total)
    if total.is_zero:
        return f"exact ({_strength(total)})"
    return "differs [" + ", ".join(failures) + "]"


def _put_absolute(out: dict, prefix: str, system: SubtorusLocalSystem) -> None:
    sup = system.support
    out[f"{prefix}.equations"] = _mat(sup.eqns.rows)
    out[f"{prefix}.offset"] = _vec(sup.offset)
    out[f"{prefix}.holonomy"] = _vec(system.holonomy)
    out[f"{prefix}.rank"] = system.rank
    out[f"{prefix}.support_dim"] = sup.dim


def _put_bundle(out: dict, prefix: str, b, warnings: list) -> None:
    out[f"{prefix}.k"] = b.k
    out[f"{prefix}.zeta"] = _evec(b.zeta)
    out[f"{prefix}.gamma_tilde"] = _emat(b.gamma_tilde)
    out[f"{prefix}.varsigma"] = _evec(b.varsigma)
    out[f"{prefix}.alpha"] = _evec(b.alpha)
    out[f"{prefix}.fibre_turns"] = _evec(b.fibre_turns)
    out[f"{prefix}.holomorphic"] = _verdict_text(b.holomorphic)
    _note(warnings, f"{prefix}.holomorphic", b.holomorphic)


def _put_relative_input(out: dict, s: RelativeSupport, system) -> None:
    out["input.k"] = s.k
    out["input.zeta"] = _evec(s.zeta)
    out["input.a"] = _emat(s.a)
    out["input.chi"] = _evec(s.chi)
    out["input.alpha"] = _evec(system.alpha)
    out["input.xi"] = _vec(system.xi)


def _put_dual_input(out: dict, b: DualBundleInput) -> None:
    out["input.k"] = b.k
    out["input.zeta"] = _evec(b.zeta)
    out["input.P"] = _emat(b.P)
    out["input.Q"] = _evec(b.Q)
    out["input.alpha"] = _evec(b.alpha)
    out["input.beta"] = _evec(b.beta)


def _put_hodge(out: dict, alpha, turns, tol, grid, warnings: list) -> None:
    f20, f11, f02 = hodge_components(alpha, turns, tol, grid)
    for name, grid_ in (("F20", f20), ("F11", f11), ("F02", f02)):
        out[name] = _emat(grid_)
        v = all_zero(is_zero(e, tol, grid) for row in grid_ for e in row)
        out[f"{name}.vanishes"] = _verdict_text(v)
        _note(warnings, f"{name}.vanishes", v)


def _gauge_residuals(k, m_free, chi, q_exprs, alpha_out, alpha_in):
    """Round-trip alpha drifts corrected by the predicted exact gauge term.

    Raises ValueError when a needed coefficient is not a rational
    constant, in which case no correction is available.
    """
    zeros = (Fraction(0),) * k
    for j in range(1, k + 1):
        corr = ZERO
        for l in range(k):
            c = m_free + l + 1
            if c > k:
                q = eval_exact(q_exprs[c - k - 1], zeros)
                corr = add(corr, mul(num(q), diff(chi[l], j)))
        drift = sub(alpha_out[j - 1], alpha_in[j - 1])
        yield f"alpha[{j}]", add(drift, mul(num(2), mul(PI, corr)))


def _alpha_comparison(k, m_free, chi, q_exprs, alpha_out, alpha_in, tol, grid, warnings):
    plain = [
        (f"alpha[{j}]", sub(alpha_out[j - 1], alpha_in[j - 1]))
        for j in range(1, k + 1)
    ]
    verdicts = [is_zero(e, tol, grid) for _, e in plain]
    total = all_zero(verdicts)
    if total.is_zero:
        _note(warnings, "alpha", total)
        return f"exact ({_strength(total)})"
    try:
        gauged = list(_gauge_residuals(k, m_free, chi, q_exprs, alpha_out, alpha_in))
    except ValueError:
        failures = [l for (l, _), v in zip(plain, verdicts) if not v.is_zero]
        return "differs [" + ", ".join(failures) + "]"
    gauged_verdicts = [is_zero(e, tol, grid) for _, e in gauged]
    gauged_total = all_zero(gauged_verdicts)
    if gauged_total.is_zero:
        _note(warnings, "alpha", gauged_total)
        return f"exact up to the gauge term ({_strength(gauged_total)})"
    failures = [l for (l, _), v in zip(gauged, gauged_verdicts) if not v.is_zero]
    return "differs [" + ", ".join(failures) + "]"


# ------------------------------------------------------------- subcommands


def _need_fibred(scene: Scene, command: str) -> None:
    if scene.kind in ("skyscraper", "subtorus"):
        raise ConditionError(
            command,
            message=(
                f"the {command} command needs a section, relative or bundle "
                f"scene; a {scene.kind} scene has no dual fibre data"
            ),
        )


def _cmd_transform(scene: Scene, args, out: dict, warnings: list) -> None:
    tol, grid = args.tol, args.grid
    if scene.kind in ("skyscraper", "subtorus"):
        res = absolute_transform(scene.absolute)
        _put_absolute(out, "input", scene.absolute)
        _put_absolute(out, "output", res.system)
        out["wit_index"] = res.wit_index
    elif scene.kind == "section":
        out["input.epsilon"] = _evec(scene.support.epsilon)
        out["input.alpha"] = _evec(scene.system.alpha)
        bundle = transform_section(scene.support, scene.system, tol, grid)
        _put_bundle(out, "output", bundle, warnings)
        out["wit_index"] = bundle.wit_index
    elif scene.kind == "relative":
        _put_relative_input(out, scene.support, scene.system)
        bundle = transform_nontransversal(scene.support, scene.system, tol, grid)
        _put_bundle(out, "output", bundle, warnings)
        out["wit_index"] = bundle.wit_index
    else:
        _put_dual_input(out, scene.bundle)
        inv = inverse_transform(scene.bundle, tol, grid)
        out["output.zeta"] = _evec(inv.support.zeta)
        out["output.a"] = _emat(inv.support.a)
        out["output.chi"] = _evec(inv.support.chi)
        out["output.alpha"] = _evec(inv.system.alpha)
        out["output.xi"] = _vec(inv.system.xi)
        out["wit_index"] = inv.wit_index


def _cmd_check(scene: Scene, args, out: dict, warnings: list) -> None:
    tol, grid = args.tol, args.grid
    if scene.kind in ("skyscraper", "subtorus"):
        _put_absolute(out, "input", scene.absolute)
        out["conditions"] = (
            "none apply; flat systems on affine subtori transform unconditionally"
        )
    elif scene.kind == "section":
        lag = check_section_lagrangian(scene.support, tol, grid)
        flat = check_flat(scene.system.alpha, tol, grid)
        out["lagrangian"] = _condition_text(lag)
        _note(warnings, "lagrangian", lag.verdict)
        out["flat"] = _condition_text(flat)
        _note(warnings, "flat", flat.verdict)
    elif scene.kind == "relative":
        c1 = check_C1_lagrangian(scene.support, tol, grid)
        c2, c3 = check_C2_C3(scene.support, tol, grid)
        for rep in (c1, c2, c3):
            out[rep.name] = _condition_text(rep)
            _note(warnings, rep.name, rep.verdict)
        if c2.holds:
            out["wit_index"] = scene.support.g - scene.support.k
    else:
        d1, d2, d3 = check_D_conditions(scene.bundle, tol, grid)
        cr = check_cauchy_riemann(scene.bundle, tol, grid)
        for rep in (d1, d2, d3, cr):
            out[rep.name] = _condition_text(rep)
            _note(warnings, rep.name, rep.verdict)


def _slices(out, seed, s, system, bundle) -> None:
    """Three seeded rational base points; each slice of the output bundle
    must equal the absolute transform of the sliced input."""
    out["seed"] = seed
    rng = random.Random(seed)
    for i in range(1, 4):
        base = tuple(
            Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3, 5)))
            for _ in range(s.k)
        )
        sl_in = fibre_system(s, system, base)
        res = absolute_transform(sl_in)
        sl_out = fibre_of_transform(bundle, base)
        agree = (
            sl_out == res.system
            and res.wit_index == bundle.wit_index
            and is_normal_to(sl_in.support, sl_out.support)
        )
        out[f"slice{i}.base"] = _vec(base)
        out[f"slice{i}.fibre"] = "matches the sliced transform" if agree else "MISMATCH"


def _cmd_roundtrip(scene: Scene, args, out: dict, warnings: list) -> None:
    tol, grid = args.tol, args.grid
    if scene.kind in ("skyscraper", "subtorus"):
        once = absolute_transform(scene.absolute)
        twice = absolute_transform(once.system)
        _put_absolute(out, "dual", once.system)
        out["dual.wit_index"] = once.wit_index
        out["dual.normal_to_input"] = str(
            is_normal_to(scene.absolute.support, once.system.support)
        ).lower()
        out["roundtrip"] = (
            "exact" if twice.system == scene.absolute else "MISMATCH"
        )
        return

    if scene.kind == "section":
        s = relative_from_section(scene.support)
        bundle = transform_section(scene.support, scene.system, tol, grid)
        inv = inverse_transform(dual_input_from_bundle(bundle), tol, grid)
        out["forward.wit_index"] = bundle.wit_index
        out["inverse.wit_index"] = inv.wit_index
        out["epsilon"] = _equality(
            [
                (f"epsilon[{j + 1}]", sub(inv.support.chi[j], scene.support.epsilon[j]))
                for j in range(s.g)
            ],
            tol, grid, warnings, "epsilon",
        )
        out["alpha"] = _alpha_comparison(
            s.k, 0, s.chi, bundle.varsigma,
            inv.system.alpha, scene.system.alpha, tol, grid, warnings,
        )
        out["xi"] = "exact" if inv.system.xi == scene.system.xi else "MISMATCH"
        if args.seed is not None:
            _slices(out, args.seed, s, scene.system, bundle)
        return

    if scene.kind == "relative":
        s, system = scene.support, scene.system
        bundle = transform_nontransversal(s, system, tol, grid)
        inv = inverse_transform(dual_input_from_bundle(bundle), tol, grid)
        out["forward.holomorphic"] = _verdict_text(bundle.holomorphic)
        _note(warnings, "forward.holomorphic", bundle.holomorphic)
        out["forward.wit_index"] = bundle.wit_index
        out["inverse.wit_index"] = inv.wit_index
        out["zeta"] = (
            "exact" if inv.support.zeta == s.zeta else "MISMATCH"
        )
        out["a"] = _equality(
            [
                (f"a[{j + 1}][{m + 1}]", sub(inv.support.a[j][m], s.a[j][m]))
                for j in range(s.k)
                for m in range(s.g - s.k)
            ],
            tol, grid, warnings, "a",
        )
        out["chi"] = _equality(
            [
                (f"chi[{j + 1}]", sub(inv.support.chi[j], s.chi[j]))
                for j in range(s.k)
            ],
            tol, grid, warnings, "chi",
        )
        out["alpha"] = _alpha_comparison(
            s.k, s.g - s.k, s.chi, bundle.varsigma,
            inv.system.alpha, system.alpha, tol, grid, warnings,
        )
        out["xi"] = "exact" if inv.system.xi == system.xi else "MISMATCH"
        if args.seed is not None:
            _slices(out, args.seed, s, system, bundle)
        return

    b = scene.bundle
    inv = inverse_transform(b, tol, grid)
    fwd = transform_nontransversal(inv.support, inv.system, tol, grid)
    out["inverse.wit_index"] = inv.wit_index
    out["forward.wit_index"] = fwd.wit_index
    out["zeta"] = "exact" if fwd.zeta == b.zeta else "MISMATCH"
    out["P"] = _equality(
        [
            (f"P[{j + 1}][{i + 1}]", sub(fwd.gamma_tilde[j][i], b.P[j][i]))
            for j in range(b.g - b.k)
            for i in range(b.k)
        ],
        tol, grid, warnings, "P",
    )
    out["Q"] = _equality(
        [
            (f"Q[{j + 1}]", sub(fwd.varsigma[j], b.Q[j]))
            for j in range(b.g - b.k)
        ],
        tol, grid, warnings, "Q",
    )
    out["beta"] = _equality(
        [
            (f"beta[{j + 1}]", sub(fwd.fibre_turns[j], b.beta[j]))
            for j in range(b.k)
        ],
        tol, grid, warnings, "beta",
    )
    out["alpha"] = _alpha_comparison(
        b.k, b.g - b.k, inv.support.chi, b.Q,
        fwd.alpha, b.alpha, tol, grid, warnings,
    )
    if args.seed is not None:
        _slices(out, args.seed, inv.support, inv.system, fwd)


def _cmd_curvature(scene: Scene, args, out: dict, warnings: list) -> None:
    tol, grid = args.tol, args.grid
    _need_fibred(scene, "curvature")
    if scene.kind == "section":
        out["input.epsilon"] = _evec(scene.support.epsilon)
        out["input.alpha"] = _evec(scene.system.alpha)
        turns = tuple(neg(e) for e in scene.support.epsilon)
        out["fibre_turns"] = _evec(turns)
        _put_hodge(out, scene.system.alpha, turns, tol, grid, warnings)
    elif scene.kind == "relative":
        _put_relative_input(out, scene.support, scene.system)
        bundle = transform_nontransversal(scene.support, scene.system, tol, grid)
        out["fibre_turns"] = _evec(bundle.fibre_turns)
        _put_hodge(out, bundle.alpha, bundle.fibre_turns, tol, grid, warnings)
    else:
        _put_dual_input(out, scene.bundle)
        out["fibre_turns"] = _evec(scene.bundle.beta)
        _put_hodge(out, scene.bundle.alpha, scene.bundle.beta, tol, grid, warnings)


_BUILDERS = {
    "transform": _cmd_transform,
    "check": _cmd_check,
    "roundtrip": _cmd_roundtrip,
    "curvature": _cmd_curvature,
}


# ------------------------------------------------------------------ driver


def _command_report(scene: Scene, args) -> dict:
    out = {"command": args.command, "kind": scene.kind, "torus.dim": scene.torus.dim}
    warnings: list[str] = []
    _BUILDERS[args.command](scene, args, out, warnings)
    out["warnings"] = warnings
    return out


def _render_text(report: dict) -> str:
    lines = []
    for key, value in report.items():
        if key == "warnings":
            if value:
                lines.extend(f"warning: {w}" for w in value)
            else:
                lines.append("warnings: none")
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    return _render_text(report)


def _run(args) -> tuple[str, int]:
    path = Path(args.scene)
    if not path.is_dir():
        return _render(_command_report(load_scene(path), args), args.format), 0

    files = sorted(path.glob("*.scene"))
    if not files:
        raise ValueError(f"no .scene files in {path}")
    code = 0
    reports = {}
    for f in files:
        try:
            reports[f.name] = _command_report(load_scene(f), args)
        except ConditionError as exc:
            reports[f.name] = {"error": f"precondition failed [{exc.condition}]: {exc}"}
            code = max(code, 2)
        except (ValueError, OSError) as exc:
            reports[f.name] = {"error": str(exc)}
            code = max(code, 1)
    if args.format == "json":
        return json.dumps(reports, indent=2) + "\n", code
    parts = []
    for name, report in reports.items():
        if "error" in report and len(report) == 1:
            parts.append(f"== {name} ==\n{report['error']}\n")
        else:
            parts.append(f"== {name} ==\n" + _render_text(report))
    return "\n".join(parts), code


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torusfm",
        description="Exact transforms of U(1) local systems on real tori.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "transform": "transform the scene's input to its dual data",
        "check": "report the condition verdicts for the scene's input",
        "roundtrip": "transform forward then back and compare exactly",
        "curvature": "Hodge components of the dual-side curvature",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, help=text)
        sp.add_argument("scene", help="scene file, or a directory of .scene files")
        sp.add_argument(
            "--format", choices=("text", "json"), default="text",
            help="report rendering (default text)",
        )
        sp.add_argument(
            "--tol", type=float, default=1e-9,
            help="numerical tolerance for zero tests (default 1e-9)",
        )
        sp.add_argument(
            "--grid", type=int, default=17,
            help="sample count per axis for numerical zero tests (default 17)",
        )
        sp.add_argument(
            "--seed", type=int, default=None,
            help="roundtrip only: seed for the fibre slice spot checks",
        )
        sp.add_argument(
            "--output", default=None,
            help="write the report to this file instead of stdout",
        )
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        rendered, code = _run(args)
    except ConditionError as exc:
        print(f"precondition failed [{exc.condition}]: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    return code


if __name__ == "__main__":
    sys.exit(main())
