"""Deterministic command-line front end.

JSON configuration in, CSV/JSON artifacts out.  All random sampling flows
through the in-repo xoshiro256** generator, so a fixed seed reproduces
byte-identical outputs on the same platform.  Exit codes: 0 all checks
passed, 1 numerical suite failure or integration failure, 2 configuration
or validation error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import bateman, evolve, floquet, flow, geom, legendrian
from .curves import Curve
from .funcspace import (ExpWrapped, GeneratorParseError, MixedPoly,
                        parse_generator)
from .rng import Xoshiro256

SCHEMA = 1

NULL_BATTERY = ("1", "z1", "6*z1*z2^2", "exp(z1*z2)", "zb1*zb2")
DIVERGENCE_BATTERY = ("1", "z1", "z1*z2", "6*z1*z2^2", "exp(z1*z2)")


class ConfigError(Exception):
    pass


def _dump(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _infer_mode(h, mode: str) -> str:
    if mode != "auto":
        return mode
    if h.is_holomorphic():
        return "direct"
    if h.is_antiholomorphic():
        return "antiholomorphic"
    raise ValueError("generator mixes holomorphic and antiholomorphic terms; "
                     "no valid mode")


def _spacetime_samples(rng: Xoshiro256, n: int):
    pts = np.array([rng.point_in_box(-2.0, 2.0, 3) for _ in range(n)])
    ts = np.array([rng.uniform(-1.0, 1.0) for _ in range(n)])
    return pts, ts


def _check(name: str, value: float, tol: float) -> dict:
    return {"name": name, "value": float(value), "tol": tol,
            "passed": bool(value <= tol)}


# -- verify suites ---------------------------------------------------------------

def suite_bateman_pde(args, rng) -> list[dict]:
    pts, ts = _spacetime_samples(rng, args.n)
    checks = []
    for variant in bateman.VARIANTS:
        res = bateman.pde_residual_array(pts, ts, variant)
        checks.append(_check(f"pde_residual_{variant}",
                             np.abs(res).max(), 1e-10))
    return checks


def suite_sphere(args, rng) -> list[dict]:
    pts, ts = _spacetime_samples(rng, args.n)
    checks = []
    for variant in bateman.VARIANTS:
        a, b, *_ = bateman.variable_jets(pts, ts, variant)
        defect = np.abs(np.abs(a) ** 2 + np.abs(b) ** 2 - 1.0).max()
        checks.append(_check(f"sphere_constraint_{variant}", defect, 1e-12))
    return checks


def suite_null(args, rng) -> list[dict]:
    gens = [args.generator] if args.generator else list(NULL_BATTERY)
    pts, _ = _spacetime_samples(rng, args.n)
    checks = []
    for text in gens:
        h = parse_generator(text)
        mode = _infer_mode(h, args.mode)
        for t in (0.0, 0.5, 1.0):
            F = bateman.rs_field_array(h, pts, t, "hopf", mode)
            eb, ee_bb = bateman.null_defect_array(F)
            E, B = F.real, F.imag
            W2 = np.sum(E * E, axis=-1) + np.sum(B * B, axis=-1)  # 2W
            scale = np.maximum(W2, 1e-30)
            worst = max(np.abs(eb / scale).max(), np.abs(ee_bb / scale).max())
            checks.append(_check(f"null_{text}_t{t}", worst, 1e-9))
    return checks


def suite_maxwell(args, rng) -> list[dict]:
    gens = [args.generator] if args.generator else list(NULL_BATTERY)
    pts, ts = _spacetime_samples(rng, args.n)
    checks = []
    for text in gens:
        h = parse_generator(text)
        mode = _infer_mode(h, args.mode)
        worst = 0.0
        for xyz, t in zip(pts, ts):
            p = bateman.SpacetimePoint(*xyz, t)
            far, amp, div_e, div_b = bateman.maxwell_residual(h, p, "hopf", mode)
            scale = 1.0 + np.linalg.norm(bateman.rs_field(h, p, "hopf", mode).components)
            worst = max(worst,
                        np.linalg.norm(far) / scale, np.linalg.norm(amp) / scale,
                        abs(div_e) / scale, abs(div_b) / scale)
        checks.append(_check(f"maxwell_{text}", worst, 1e-6))
    return checks


def suite_divergence(args, rng) -> list[dict]:
    pts = [geom.S3Point(np.array(rng.sphere_point())) for _ in range(args.n)]
    checks = []
    for text in DIVERGENCE_BATTERY:
        h = parse_generator(text)
        if isinstance(h, ExpWrapped):
            continue  # exact ambient divergence is defined for polynomials
        worst = max(max(abs(v) for v in legendrian.divergence_identities(h, p))
                    for p in pts)
        checks.append(_check(f"divergence_zero_{text}", worst, 1e-12))
    zb1 = parse_generator("zb1")
    worst_eq = 0.0
    for p in pts:
        de, db, re2, im2 = legendrian.divergence_identities(zb1, p)
        worst_eq = max(worst_eq, abs(de - re2), abs(db - im2))
    checks.append(_check("divergence_equals_cr_form_zb1", worst_eq, 1e-12))
    return checks


def suite_stereo(args, rng) -> list[dict]:
    worst = 0.0
    count = 0
    while count < args.n:
        q = np.array(rng.point_in_box(-10.0, 10.0, 3))
        if np.linalg.norm(q) > 10.0:
            continue
        count += 1
        back = geom.stereo_project(geom.stereo_lift(q))
        worst = max(worst, float(np.max(np.abs(back.coords - q))))
    return [_check("stereo_round_trip", worst, 1e-12)]


def suite_seifert(args, rng) -> list[dict]:
    spec = legendrian.SeifertSpec(args.p, args.q)
    worst_pair = 0.0
    worst_ratio = 0.0
    count = 0
    while count < args.n:
        p = geom.S3Point(np.array(rng.sphere_point()))
        s, _, _ = geom.hopf_coords(p)
        if min(s, math.pi / 2 - s) < 1e-2:
            continue
        count += 1
        X = legendrian.seifert_field(spec, p)
        alpha = legendrian.seifert_form(spec, p)
        worst_pair = max(worst_pair, abs(float(alpha @ X)))
        ratio = legendrian.contact_volume_ratio(spec, p)
        expected = (spec.p + spec.q) * (spec.p * math.cos(s) ** 2
                                        + spec.q * math.sin(s) ** 2)
        worst_ratio = max(worst_ratio, abs(ratio - expected))
    return [_check(f"seifert_pairing_{spec.p}_{spec.q}", worst_pair, 1e-12),
            _check(f"seifert_volume_ratio_{spec.p}_{spec.q}", worst_ratio, 1e-6)]


def suite_pushforward(args, rng) -> list[dict]:
    h = parse_generator(args.generator or "1")
    worst = 0.0
    count = 0
    while count < args.n:
        w = geom.S3Point(np.array(rng.sphere_point()))
        if 1.0 - w.coords[0] < 1e-2:
            continue
        if abs(complex(h.eval(w.z1, w.z2))) < 1e-2:
            continue
        count += 1
        worst = max(worst, bateman.sphere_pushforward_check(h, args.t, w))
    return [_check("sphere_pushforward", worst, 1e-6)]


def suite_first_integrals(args, rng) -> list[dict]:
    p_, q_ = 2, 3
    h = parse_generator("6*z1*z2^2")
    G = legendrian.tt_polynomial(p_, q_)
    checks = []
    for part, take in (("E", "imag"), ("B", "real")):
        start = geom.stereo_project(
            geom.S3Point(legendrian.tt_torus_curve(
                p_, q_, arg_target=math.pi / 2).samples[0])).coords
        start = start + np.array([0.05, -0.03, 0.02])  # generic nearby seed
        c = flow.trace(flow.TraceSpec(flow.RSLineSelector(h, part), start,
                                      20.0, rtol=1e-11, atol=1e-12))
        mono = G + MixedPoly.constant(1.0)   # rho z1^p z2^q
        pts = geom.stereo_lift_array(c.samples)
        z1 = pts[:, 0] + 1j * pts[:, 1]
        z2 = pts[:, 2] + 1j * pts[:, 3]
        vals = np.asarray(mono.eval(z1, z2))
        series = getattr(vals, take)
        drift = float(np.max(np.abs(series - series[0])))
        checks.append(_check(f"first_integral_{part}_line", drift, 1e-8))
    return checks


def suite_tt_link(args, rng) -> list[dict]:
    checks = []
    for (p_, q_) in ((1, 1), (2, 3)):
        G = legendrian.tt_polynomial(p_, q_)
        c = legendrian.tt_torus_curve(p_, q_)
        on_zero, tangential = legendrian.tt_link_defect(G, c)
        checks.append(_check(f"tt_zero_set_{p_}_{q_}", on_zero, 1e-8))
        checks.append(_check(f"tt_tangential_{p_}_{q_}", tangential, 1e-8))
    return checks


SUITES = {
    "bateman-pde": suite_bateman_pde,
    "sphere": suite_sphere,
    "null": suite_null,
    "maxwell": suite_maxwell,
    "divergence": suite_divergence,
    "stereo": suite_stereo,
    "seifert": suite_seifert,
    "pushforward": suite_pushforward,
    "first-integrals": suite_first_integrals,
    "tt-link": suite_tt_link,
}


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        raise ConfigError(f"unknown suite {args.suite!r}")
    rng = Xoshiro256(args.seed)
    checks = SUITES[args.suite](args, rng)
    passed = all(c["passed"] for c in checks)
    report = {
        "schema": SCHEMA, "command": "verify", "suite": args.suite,
        "seed": args.seed, "n": args.n, "generator": args.generator,
        "checks": checks, "passed": passed,
    }
    _dump(report, args.out)
    return 0 if passed else 1


# -- trace -----------------------------------------------------------------------

def _build_selector(args):
    if args.field == "legendrian":
        h = parse_generator(args.generator or "1")
        return flow.LegendrianSelector(h, args.polarity), True
    if args.field == "torus":
        return flow.TorusSelector(), True
    if args.field == "seifert":
        return flow.SeifertSelector(args.p, args.q), True
    if args.field == "rs":
        h = parse_generator(args.generator or "1")
        mode = _infer_mode(h, args.mode)
        return flow.RSLineSelector(h, args.part, mode, "hopf", args.time), False
    if args.field == "poynting":
        h = parse_generator(args.generator or "1")
        mode = _infer_mode(h, args.mode)
        return flow.PoyntingSelector(h, mode, args.time), False
    raise ConfigError(f"unknown field {args.field!r}")


def _start_point(args, on_sphere: bool) -> np.ndarray:
    if args.start is not None:
        vals = [float(v) for v in args.start.split(",")]
        if on_sphere and len(vals) != 4:
            raise ConfigError("sphere fields need --start x1,y1,x2,y2")
        if not on_sphere and len(vals) != 3:
            raise ConfigError("spatial fields need --start x,y,z")
        return np.array(vals)
    if on_sphere:
        a = args.start_a
        if a is None:
            return np.array([1.0, 0.0, 0.0, 0.0])
        if not 0.0 < a < 1.0:
            raise ConfigError("--start-a must lie in (0, 1)")
        return np.array([math.sqrt(a), 0.0, math.sqrt(1.0 - a), 0.0])
    raise ConfigError("need --start x,y,z")


def cmd_trace(args) -> int:
    sidecar: dict = {"schema": SCHEMA, "command": "trace", "field": args.field,
                     "generator": args.generator}
    if args.from_curve:
        curve = Curve.read_csv(args.from_curve)
        sidecar["source"] = args.from_curve
    else:
        selector, on_sphere = _build_selector(args)
        start = _start_point(args, on_sphere)
        spec = flow.TraceSpec(selector, start, args.tau,
                              rtol=args.rtol, atol=args.atol,
                              max_step=args.max_step)
        curve = flow.trace(spec)
        sidecar["tau"] = args.tau
        sidecar["renorm_accum"] = curve.renorm_accum

        if args.closure or args.windings or args.rotation:
            period = flow.detect_closure(curve, args.closure_tol)
            sidecar["period"] = period
            if period is not None:
                curve = flow.truncate_to_period(curve, period)
            elif args.windings or args.rotation:
                raise RuntimeError("orbit did not close; windings/rotation undefined")
        if args.windings:
            m, n = flow.phase_windings(curve)
            sidecar["windings"] = [m, n]
        if args.rotation:
            sidecar["rotation_number"] = legendrian.rotation_number(curve)

    if args.integral:
        f = parse_generator(args.integral)
        sidecar["integral_drift"] = flow.integral_drift(curve, f)

    if args.transport_to is not None:
        h = parse_generator(args.generator or "1")
        mode = _infer_mode(h, args.mode)
        tspec = evolve.TransportSpec(h, curve, args.time, args.transport_to, mode)
        curve = poynted = evolve.poynting_transport(tspec)
        sidecar["transported_to"] = args.transport_to
        sidecar["closure_gap"] = poynted.closure_gap()
        if curve.closed:
            sidecar["tangency_defect"] = evolve.tangency_at_time(
                h, poynted, args.transport_to, mode, args.part)

    if args.link_with:
        other = Curve.read_csv(args.link_with)
        sidecar["linking_number"] = flow.linking_number(curve, other)

    if args.out:
        curve.write_csv(args.out)
        _dump(sidecar, args.out + ".json")
    else:
        _dump(sidecar, None)
    return 0


# -- small commands ----------------------------------------------------------------

def cmd_rotation(args) -> int:
    curve = Curve.read_csv(args.infile)
    if curve.tangents is None:
        curve = curve.resampled(max(1024, len(curve.samples)))
    k = legendrian.rotation_number(curve)
    _dump({"schema": SCHEMA, "command": "rotation", "infile": args.infile,
           "rotation_number": k}, args.out)
    return 0


def cmd_link(args) -> int:
    a = Curve.read_csv(args.a)
    b = Curve.read_csv(args.b)
    lk = flow.linking_number(a, b)
    _dump({"schema": SCHEMA, "command": "link", "a": args.a, "b": args.b,
           "linking_number": lk}, args.out)
    return 0


def cmd_monodromy(args) -> int:
    if args.orbit:
        if args.orbit == "hopf":
            sel = flow.LegendrianSelector(MixedPoly.constant(1.0), "B")
            theta = MixedPoly.constant(1.0)
            start = np.array([1.0, 0.0, 0.0, 0.0])
            tau = 2.0 * math.pi + 0.5
        elif args.orbit == "torus":
            sel = flow.TorusSelector()
            theta = MixedPoly.monomial(1.0, 0, 0, 1, 1)
            start = np.array([math.sqrt(0.6), 0.0, math.sqrt(0.4), 0.0])
            tau = 10.0 * math.pi + 0.5
        else:
            raise ConfigError(f"unknown orbit {args.orbit!r}")
        c = flow.trace(flow.TraceSpec(sel, start, tau, rtol=1e-12, atol=1e-12))
        period = flow.detect_closure(c, 1e-8)
        if period is None:
            raise RuntimeError("orbit did not close")
        orbit = flow.truncate_to_period(c, period)
        report = floquet.orbit_monodromy(sel, orbit, theta)
    elif args.omega is not None:
        spec = floquet.NveSpec(args.omega ** 2 / 2.0 - 1.0)
        report = floquet.monodromy(spec)
    elif args.g0 is not None:
        report = floquet.monodromy(floquet.NveSpec(args.g0, period=args.period))
    else:
        raise ConfigError("need --omega, --g0 or --orbit")

    payload = report.to_json()
    payload.update({"schema": SCHEMA, "command": "monodromy"})
    if args.omega is not None and not args.orbit:
        ana = floquet.analytic_monodromy(args.omega)
        payload["analytic_match"] = float(np.abs(report.matrix - ana).max())
    if args.gamma is not None and report.omega is not None:
        payload["diophantine"] = floquet.diophantine_check(
            report.omega / (2.0 * math.pi), args.gamma, args.dio_tau,
            args.qmax).to_json()
    _dump(payload, args.out)
    return 0


_NAMED_NUMBERS = {
    "golden": (math.sqrt(5.0) - 1.0) / 2.0,
    "sqrt2m1": math.sqrt(2.0) - 1.0,
}


def _parse_number(text: str) -> float:
    if text in _NAMED_NUMBERS:
        return _NAMED_NUMBERS[text]
    if "/" in text:
        num, den = text.split("/")
        return float(num) / float(den)
    return float(text)


def cmd_diophantine(args) -> int:
    w = _parse_number(args.w)
    rep = floquet.diophantine_check(w, args.gamma, args.dio_tau, args.qmax)
    payload = rep.to_json()
    payload.update({"schema": SCHEMA, "command": "diophantine", "w_expr": args.w})
    _dump(payload, args.out)
    return 0 if rep.passed else 1


def cmd_seifert(args) -> int:
    args.suite = "seifert"
    return cmd_verify(args)


def cmd_transport_check(args) -> int:
    h = parse_generator(args.generator or "1")
    mode = _infer_mode(h, args.mode)
    if args.which == "hopfion":
        starts = [np.array([0.0, 0.6, 0.8]), np.array([0.2, 0.5, -0.4])]
        tau = 60.0
    elif args.which == "torus-knot":
        starts = []
        for sign in (1, -1):
            w = geom.S3Point(legendrian.tt_torus_curve(
                2, 3, arg_target=sign * math.pi / 2).samples[0])
            starts.append(geom.stereo_project(w).coords)
        tau = 35.0
    else:
        raise ConfigError(f"unknown target {args.which!r}")

    orbits = []
    for s in starts:
        c = flow.trace(flow.TraceSpec(flow.RSLineSelector(h, "E", mode, "hopf", 0.0),
                                      s, tau, rtol=1e-11, atol=1e-12))
        period = flow.detect_closure(c, 1e-7)
        if period is None:
            raise RuntimeError("electric line did not close")
        orbits.append(flow.truncate_to_period(c, period, 1200))
    lk_before = flow.linking_number(orbits[0], orbits[1])
    moved = [evolve.poynting_transport(evolve.TransportSpec(h, o, 0.0, args.t1, mode))
             for o in orbits]
    lk_after = flow.linking_number(moved[0], moved[1])
    tangency = max(evolve.tangency_at_time(h, m, args.t1, mode) for m in moved)
    gap = max(m.closure_gap() for m in moved)
    checks = [
        _check("tangency_after_transport", tangency, 1e-3),
        _check("closure_after_transport", gap, 1e-6),
        _check("linking_preserved", abs(lk_after - lk_before), 0),
    ]
    passed = all(c["passed"] for c in checks)
    _dump({"schema": SCHEMA, "command": "transport-check", "which": args.which,
           "t1": args.t1, "linking_before": lk_before, "linking_after": lk_after,
           "checks": checks, "passed": passed}, args.out)
    return 0 if passed else 1


# -- parser / config -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nullfield",
                                description="verification and tracing tools for "
                                            "null electromagnetic fields")
    p.add_argument("--config", help="JSON config file; flags override its values")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=1)
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("verify", help="run a residual verification suite")
    common(sp)
    sp.add_argument("--suite", required=True, choices=sorted(SUITES))
    sp.add_argument("--generator", default=None)
    sp.add_argument("--mode", default="auto",
                    choices=("auto", "direct", "antiholomorphic"))
    sp.add_argument("--n", type=int, default=1000)
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--q", type=int, default=3)
    sp.add_argument("--t", type=float, default=0.0)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("trace", help="trace a field line and post-process it")
    common(sp)
    sp.add_argument("--field", required=True,
                    choices=("legendrian", "torus", "seifert", "rs", "poynting"))
    sp.add_argument("--generator", default=None)
    sp.add_argument("--polarity", default="E", choices=("E", "B"))
    sp.add_argument("--part", default="E", choices=("E", "B"))
    sp.add_argument("--mode", default="auto",
                    choices=("auto", "direct", "antiholomorphic"))
    sp.add_argument("--time", type=float, default=0.0)
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--q", type=int, default=3)
    sp.add_argument("--start", default=None)
    sp.add_argument("--start-a", dest="start_a", type=float, default=None)
    sp.add_argument("--tau", type=float, default=10.0)
    sp.add_argument("--rtol", type=float, default=1e-10)
    sp.add_argument("--atol", type=float, default=1e-10)
    sp.add_argument("--max-step", dest="max_step", type=float, default=0.1)
    sp.add_argument("--closure", action="store_true")
    sp.add_argument("--closure-tol", dest="closure_tol", type=float, default=1e-8)
    sp.add_argument("--windings", action="store_true")
    sp.add_argument("--rotation", action="store_true")
    sp.add_argument("--integral", default=None)
    sp.add_argument("--link-with", dest="link_with", default=None)
    sp.add_argument("--transport-to", dest="transport_to", type=float, default=None)
    sp.add_argument("--from-curve", dest="from_curve", default=None)
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("rotation", help="rotation number of a stored curve")
    common(sp)
    sp.add_argument("--in", dest="infile", required=True)
    sp.set_defaults(func=cmd_rotation)

    sp = sub.add_parser("link", help="Gauss linking number of two stored curves")
    common(sp)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.set_defaults(func=cmd_link)

    sp = sub.add_parser("monodromy", help="variational monodromy reports")
    common(sp)
    sp.add_argument("--omega", type=float, default=None)
    sp.add_argument("--g0", type=float, default=None)
    sp.add_argument("--period", type=float, default=1.0)
    sp.add_argument("--orbit", default=None, choices=("hopf", "torus"))
    sp.add_argument("--gamma", type=float, default=None)
    sp.add_argument("--dio-tau", dest="dio_tau", type=float, default=2.5)
    sp.add_argument("--qmax", type=int, default=10000)
    sp.set_defaults(func=cmd_monodromy)

    sp = sub.add_parser("diophantine", help="bounded Diophantine check")
    common(sp)
    sp.add_argument("--w", required=True,
                    help="float, p/q, or one of: golden, sqrt2m1")
    sp.add_argument("--gamma", type=float, default=0.2)
    sp.add_argument("--dio-tau", dest="dio_tau", type=float, default=2.5)
    sp.add_argument("--qmax", type=int, default=10000)
    sp.set_defaults(func=cmd_diophantine)

    sp = sub.add_parser("seifert", help="circle-fibration contact checks")
    common(sp)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, default=100)
    sp.add_argument("--generator", default=None)
    sp.set_defaults(func=cmd_seifert)

    sp = sub.add_parser("transport-check",
                        help="closure/tangency/linking preservation under "
                             "energy-flow transport")
    common(sp)
    sp.add_argument("--which", default="hopfion", choices=("hopfion", "torus-knot"))
    sp.add_argument("--generator", default=None)
    sp.add_argument("--mode", default="auto",
                    choices=("auto", "direct", "antiholomorphic"))
    sp.add_argument("--t1", type=float, default=0.5)
    sp.set_defaults(func=cmd_transport_check)

    return p


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Fold `--config file.json` into the argument list.

    Config keys become long flags placed before the explicit flags, so the
    command line always wins.  Unknown keys and schema mismatches are
    rejected.
    """
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    try:
        path = argv[i + 1]
    except IndexError:
        raise ConfigError("--config needs a path")
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    if data.pop("schema", None) != SCHEMA:
        raise ConfigError(f"config schema must be {SCHEMA}")
    command = data.pop("command", None)
    rest = [a for j, a in enumerate(argv) if j not in (i, i + 1)]
    if command is None:
        if not rest:
            raise ConfigError("config must name a command")
        command, rest = rest[0], rest[1:]
    elif rest and not rest[0].startswith("-"):
        if rest[0] != command:
            raise ConfigError("command on the command line conflicts with config")
        rest = rest[1:]

    sub_actions = [a for a in parser._actions
                   if isinstance(a, argparse._SubParsersAction)]
    subparser = sub_actions[0].choices.get(command)
    if subparser is None:
        raise ConfigError(f"unknown command {command!r}")
    known = {a.dest for a in subparser._actions}
    injected = []
    for key, value in data.items():
        dest = key.replace("-", "_")
        if dest not in known:
            raise ConfigError(f"unknown config key {key!r}")
        flag = "--" + key.replace("_", "-")
        if isinstance(value, bool):
            if value:
                injected.append(flag)
        else:
            injected.extend([flag, str(value)])
    return [command] + injected + rest


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except (ConfigError, GeneratorParseError, ValueError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
