"""Command-line frontend.

Subcommands cover matrix analysis (classification, phases, decompositions,
Takagi, real congruence, numerical range boundary), system analysis
(poles/structure, phase/gain responses, H-infinity, Phi-infinity), and
feedback work (certificates, destabilizer synthesis, interconnection).

File formats: matrices {"re": [[...]], "im": [[...]]}; systems
{"A": [[...]], "B": [[...]], "C": [[...]], "D": [[...]]}; envelopes
{"points": [{"omega": w | "inf", "alpha": a, "beta": b}, ...]}. Angles are
emitted in radians with 12 significant digits; exit code 0 = success,
2 = analysis succeeded but the tested condition is violated, 1 = error
(machine-readable JSON on stderr).
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import feedback as fb
from . import lti
from . import numrange
from . import phasecore
from . import symmetric as sym
from .errors import PhasekitError
from .numerics import ToleranceConfig


class ParseError(PhasekitError):
    pass


class IoError(PhasekitError):
    pass


def _fmt(x: float):
    """12 significant digits, stable across runs."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.12g}")


def _matrix_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"re": [[_fmt(v.real) for v in row] for row in m],
            "im": [[_fmt(v.imag) for v in row] for row in m]}


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc


def parse_matrix(path: str) -> np.ndarray:
    data = _load_json(path)
    if not isinstance(data, dict) or "re" not in data:
        raise ParseError(f"{path}: matrix JSON needs a 're' field")
    try:
        re_part = np.asarray(data["re"], dtype=float)
        im_part = np.asarray(data.get("im", np.zeros_like(re_part)), dtype=float)
        mat = re_part + 1j * im_part
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: matrix entries must be numeric") from exc
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ParseError(f"{path}: matrix must be square, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise ParseError(f"{path}: matrix entries must be finite")
    return mat


def parse_system(path: str) -> lti.StateSpace:
    data = _load_json(path)
    for key in ("A", "B", "C", "D"):
        if not isinstance(data, dict) or key not in data:
            raise ParseError(f"{path}: system JSON needs fields A, B, C, D")
    try:
        return lti.StateSpace(a=np.asarray(data["A"], dtype=float),
                              b=np.asarray(data["B"], dtype=float),
                              c=np.asarray(data["C"], dtype=float),
                              d=np.asarray(data["D"], dtype=float))
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def parse_envelope(path: str) -> fb.PhaseEnvelope:
    data = _load_json(path)
    if not isinstance(data, dict) or "points" not in data:
        raise ParseError(f"{path}: envelope JSON needs a 'points' list")
    pts = []
    for entry in data["points"]:
        try:
            w = entry["omega"]
            w = math.inf if w == "inf" else float(w)
            pts.append((w, float(entry["alpha"]), float(entry["beta"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{path}: bad envelope point {entry!r}") from exc
    try:
        return fb.PhaseEnvelope(breakpoints=tuple(pts))
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _system_json(g: lti.StateSpace) -> dict:
    return {"A": [[_fmt(v) for v in row] for row in g.a],
            "B": [[_fmt(v) for v in row] for row in g.b],
            "C": [[_fmt(v) for v in row] for row in g.c],
            "D": [[_fmt(v) for v in row] for row in g.d]}


def _emit(text: str, out_path: str | None):
    if out_path:
        try:
            with open(out_path, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise IoError(f"cannot write {out_path}: {exc}") from exc
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _emit_json(obj, out_path: str | None):
    _emit(json.dumps(obj, indent=2, sort_keys=True), out_path)


def _tol_from_args(args) -> ToleranceConfig:
    return ToleranceConfig(rank_tol=args.rank_tol, psd_tol=args.psd_tol,
                           recon_tol=args.recon_tol)


def _omega_key(sample) -> float:
    return sample.theta if sample.kind == "arc" and sample.theta is not None \
        else sample.omega


def _phase_response_csv(resp: lti.PhaseResponse) -> str:
    lines = ["omega_or_theta,kind,phi_low,phi_high,gamma"]
    for s in resp.samples:
        key = _omega_key(s)
        lines.append(f"{key:.12g},{s.kind},{s.phi_low:.12g},{s.phi_high:.12g},"
                     f"{s.gamma:.12g}")
    return "\n".join(lines) + "\n"


def _decomposition_json(dec) -> dict:
    return {"T": _matrix_json(dec.t),
            "kernel_dim": dec.kernel_dim,
            "d_phases": [_fmt(p) for p in dec.d_phases],
            "e_block_count": dec.e_block_count,
            "theta0": _fmt(dec.theta0)}


# ----------------------------------------------------------------------
# subcommand handlers (each returns the process exit code)


def _cmd_matrix_classify(args, tol):
    mat = parse_matrix(args.matrix)
    cls = numrange.classify(mat, tol)
    out = {"class": cls.tag.value}
    if cls.delta is not None:
        out["delta"] = _fmt(cls.delta)
    if cls.theta0 is not None:
        out["theta0"] = _fmt(cls.theta0)
    out["on_tolerance_band"] = cls.on_tolerance_band
    if cls.semi_sectorial:
        sector = phasecore.phases(mat, tol=tol)
        out["phases"] = [_fmt(p) for p in sector.phases]
        out["gamma"] = _fmt(sector.gamma)
    _emit_json(out, args.out)
    return 0


def _cmd_matrix_phases(args, tol):
    mat = parse_matrix(args.matrix)
    hint = args.branch_hint
    sector = phasecore.phases(mat, branch_center_hint=hint, tol=tol)
    _emit_json({"phases": [_fmt(p) for p in sector.phases],
                "gamma": _fmt(sector.gamma),
                "delta": _fmt(sector.delta)}, args.out)
    return 0


def _cmd_decompose(args, tol):
    mat = parse_matrix(args.matrix)
    dec = phasecore.semi_sectorial_decompose(mat, tol)
    _emit_json(_decomposition_json(dec), args.out)
    return 0


def _cmd_takagi(args, tol):
    mat = parse_matrix(args.matrix)
    fac = sym.takagi(mat, tol)
    _emit_json({"U": _matrix_json(fac.u),
                "sigma": [_fmt(s) for s in fac.sigma]}, args.out)
    return 0


def _cmd_real_congruence(args, tol):
    mat = parse_matrix(args.matrix)
    dec = sym.real_congruence_decompose(mat, tol)
    _emit_json(_decomposition_json(dec), args.out)
    return 0


def _cmd_numrange(args, tol):
    mat = parse_matrix(args.matrix)
    pts = numrange.boundary_points(mat, samples=args.samples)
    lines = ["re,im"] + [f"{p.real:.12g},{p.imag:.12g}" for p in pts]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_sys_info(args, tol):
    g = parse_system(args.system)
    pole_list = lti.poles(g, tol)
    checks = lti.structural_checks(g, tol=tol)
    out = {"poles": [{"re": _fmt(p.value.real), "im": _fmt(p.value.imag),
                      "multiplicity": p.multiplicity,
                      "semi_simple": p.semi_simple} for p in pole_list],
           "lyapunov_stable": lti.is_lyapunov_stable(g, tol),
           "stable": lti.is_stable(g, tol),
           "symmetric": checks.symmetric,
           "inner": checks.inner,
           "frequency_wise_class": (checks.frequency_wise_class.value
                                    if checks.frequency_wise_class else None)}
    _emit_json(out, args.out)
    return 0


def _cmd_phase_response(args, tol):
    g = parse_system(args.system)
    resp = lti.phase_response(g, tol=tol)
    _emit(_phase_response_csv(resp), args.out)
    return 0


def _cmd_gain_response(args, tol):
    g = parse_system(args.system)
    resp = lti.gain_response(g, tol=tol)
    lines = ["omega,sigma_max"]
    for w, s in resp.samples:
        lines.append(f"{'inf' if math.isinf(w) else format(w, '.12g')},{s:.12g}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_hinf(args, tol):
    g = parse_system(args.system)
    norm, w_peak = lti.hinf_norm(g, tol=tol)
    _emit_json({"hinf": _fmt(norm),
                "omega_peak": "inf" if math.isinf(w_peak) else _fmt(w_peak)},
               args.out)
    return 0


def _cmd_phi_inf(args, tol):
    g = parse_system(args.system)
    lo, hi = lti.phi_inf_sector(g, tol=tol)
    _emit_json({"phi_low": _fmt(lo), "phi_high": _fmt(hi)}, args.out)
    return 0


def _certificate_json(cert: fb.Certificate) -> dict:
    out = {"verdict": cert.verdict.value,
           "margin": [["inf" if math.isinf(w) else _fmt(w), _fmt(m)]
                      for w, m in cert.margin]}
    if cert.violation_omega is not None:
        out["violation_omega"] = ("inf" if math.isinf(cert.violation_omega)
                                  else _fmt(cert.violation_omega))
    if cert.violation_data:
        out["violation"] = {k: _fmt(v) for k, v in cert.violation_data.items()}
    if cert.reason:
        out["reason"] = cert.reason
    return out


def _cmd_certify_gain(args, tol):
    g = parse_system(args.system)
    h = parse_system(args.other)
    cert = fb.certify_small_gain(g, h, tol=tol)
    _emit_json(_certificate_json(cert), args.out)
    return 0 if cert.verdict is fb.Verdict.CERTIFIED_STABLE else 2


def _cmd_certify_phase(args, tol):
    g = parse_system(args.system)
    h = parse_system(args.other)
    cert = fb.certify_small_phase(g, h, tol=tol)
    _emit_json(_certificate_json(cert), args.out)
    return 0 if cert.verdict is fb.Verdict.CERTIFIED_STABLE else 2


def _report_json(rep: fb.DestabilizerReport) -> dict:
    out = {"case": rep.case,
           "H": _system_json(rep.h)}
    if rep.omega0 is not None:
        out["omega0"] = "inf" if math.isinf(rep.omega0) else _fmt(rep.omega0)
    if rep.target is not None:
        out["target"] = {"re": _fmt(rep.target.real), "im": _fmt(rep.target.imag)}
    if rep.sigma_min is not None:
        out["sigma_min"] = _fmt(rep.sigma_min)
    if rep.membership is not None:
        out["membership"] = {"member": rep.membership.member,
                             "worst_slack": _fmt(rep.membership.worst_slack),
                             "symmetric_ok": rep.membership.symmetric_ok}
    if rep.closed_loop_pole is not None:
        out["closed_loop_pole"] = {"re": _fmt(rep.closed_loop_pole.real),
                                   "im": _fmt(rep.closed_loop_pole.imag)}
    if rep.pole_distance is not None:
        out["pole_distance"] = _fmt(rep.pole_distance)
    if rep.ill_posed_at_infinity:
        out["ill_posed_at_infinity"] = True
    if rep.gain_profile:
        out["gain_profile"] = [["inf" if math.isinf(w) else _fmt(w),
                                _fmt(sh), _fmt(gv)] for w, sh, gv in rep.gain_profile]
    return out


def _cmd_synthesize(args, tol):
    g = parse_system(args.system)
    if args.kind == "gain":
        if args.gamma is not None:
            env = fb.GainEnvelope(constant=args.gamma)
        elif args.weight:
            env = fb.GainEnvelope(weight=parse_system(args.weight))
        else:
            raise ParseError("gain synthesis needs --gamma or --weight")
        rep = fb.synthesize_destabilizer_gain_symmetric(g, env, tol=tol)
    else:
        if not args.envelope:
            raise ParseError("phase synthesis needs --envelope")
        env = parse_envelope(args.envelope)
        if args.kind == "inner":
            rep = fb.synthesize_destabilizer_inner(g, env, tol=tol)
        else:
            rep = fb.synthesize_destabilizer_symmetric(g, env, tol=tol)
    _emit_json(_report_json(rep), args.out)
    return 0


def _cmd_interconnect(args, tol):
    g = parse_system(args.system)
    h = parse_system(args.other)
    _emit_json(_system_json(fb.interconnect(g, h, tol)), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phasekit",
                                     description="matrix and LTI phase analysis")
    parser.add_argument("--rank-tol", type=float, default=1e-10)
    parser.add_argument("--psd-tol", type=float, default=1e-10)
    parser.add_argument("--recon-tol", type=float, default=1e-8)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.set_defaults(handler=handler)
        return p

    p = add("matrix-classify", _cmd_matrix_classify)
    p.add_argument("matrix")
    p = add("matrix-phases", _cmd_matrix_phases)
    p.add_argument("matrix")
    p.add_argument("--branch-hint", type=float, default=None)
    p = add("decompose", _cmd_decompose)
    p.add_argument("matrix")
    p = add("takagi", _cmd_takagi)
    p.add_argument("matrix")
    p = add("real-congruence", _cmd_real_congruence)
    p.add_argument("matrix")
    p = add("numrange", _cmd_numrange)
    p.add_argument("matrix")
    p.add_argument("--samples", type=int, default=512)
    p = add("sys-info", _cmd_sys_info)
    p.add_argument("system")
    p = add("phase-response", _cmd_phase_response)
    p.add_argument("system")
    p = add("gain-response", _cmd_gain_response)
    p.add_argument("system")
    p = add("hinf", _cmd_hinf)
    p.add_argument("system")
    p = add("phi-inf", _cmd_phi_inf)
    p.add_argument("system")
    p = add("certify-gain", _cmd_certify_gain)
    p.add_argument("system")
    p.add_argument("other")
    p = add("certify-phase", _cmd_certify_phase)
    p.add_argument("system")
    p.add_argument("other")
    p = add("synthesize", _cmd_synthesize)
    p.add_argument("system")
    p.add_argument("--kind", choices=("phase", "gain", "inner"), default="phase")
    p.add_argument("--envelope", default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--weight", default=None)
    p = add("interconnect", _cmd_interconnect)
    p.add_argument("system")
    p.add_argument("other")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = _tol_from_args(args)
        return args.handler(args, tol)
    except PhasekitError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return 1
    except ValueError as exc:
        err = {"error": "DomainError", "message": str(exc)}
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
