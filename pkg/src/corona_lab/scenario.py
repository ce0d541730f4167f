"""Scenario files in, verification reports out.

A scenario is a JSON object with a ``kind`` and the data that kind needs.
Each run produces a report whose checks all carry a measured value and the
threshold it was held to; the report passes iff every check passes.
"""

from __future__ import annotations

import json
import math
import os
import time
import traceback
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bezout, kernel, norms, transfer
from .corpus import (SCHEMA_VERSION, CorpusParams, draw_instance, instance_rng,
                     random_weights)
from .errors import CoronaLabError, ParseError
from .functions import (DEFAULT_POLE_MARGIN, FnTuple, Poly, SubalgebraTuple,
                        ZeroIdeal, fn_from_json, fn_to_json, poly_from_json)

__all__ = ["KINDS", "DEFAULT_TOLERANCES", "Scenario", "VerificationReport",
           "parse_scenario", "load_scenario", "run", "run_scenario",
           "identity_suite", "tol_scale"]

KINDS = ("verify-lemma21", "verify-lemma22", "solve-corona", "solve-ideal",
         "solve-wolff", "check-bounds")

DEFAULT_TOLERANCES = {
    "identity_self": 1e-12,
    "identity_pair": 1e-12,
    "kernel_product": 1e-13,
    "singular_values": 1e-9,
    "q_norm": 1e-10,
    "bezout": 1e-10,
    "corona_residual": 1e-10,
    "ideal_residual": 1e-9,
    "membership": 1.0,
    "corona_constant": 1e-12,
    "ideal_constant": 1e-10,
    "norm_slack": 1e-8,
    "eq4": 1e-10,
    "orthogonality": 1e-10,
    "zero_gramian": 1e-12,
    "phi_slack": 1e-8,
}

EQ4_POINTS = 64


def tol_scale():
    """Global tolerance multiplier from CORONA_LAB_TOL_SCALE (default 1)."""
    raw = os.environ.get("CORONA_LAB_TOL_SCALE", "1")
    try:
        val = float(raw)
    except ValueError:
        raise ParseError(f"CORONA_LAB_TOL_SCALE is not a number: {raw!r}")
    if not val > 0:
        raise ParseError(f"CORONA_LAB_TOL_SCALE must be positive, got {val}")
    return val


@dataclass
class Scenario:
    kind: str
    raw: dict
    seed: int = None
    ideal: ZeroIdeal = None
    tuple_spec: dict = None
    h_spec: object = None
    epsilon: float = None
    grid: norms.DiskGrid = field(default_factory=norms.DiskGrid)
    tolerances: dict = field(default_factory=dict)
    margin: float = DEFAULT_POLE_MARGIN

    def tol(self, name):
        return self.tolerances.get(name, DEFAULT_TOLERANCES[name]) * tol_scale()


def _require(obj, key, where=None):
    if key not in obj:
        raise ParseError("missing required field", field=f"{where}.{key}" if where else key)
    return obj[key]


def parse_scenario(obj):
    if not isinstance(obj, dict):
        raise ParseError("scenario must be a JSON object")
    kind = _require(obj, "kind")
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}", field="kind")
    version = obj.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {version}", field="schema_version")
    try:
        scen = Scenario(kind=kind, raw=obj)
        scen.margin = float(obj.get("margin", DEFAULT_POLE_MARGIN))
        scen.grid = norms.DiskGrid.from_json(obj.get("grid"))
        tols = obj.get("tolerances") or {}
        unknown = set(tols) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ParseError(f"unknown tolerance(s) {sorted(unknown)}", field="tolerances")
        scen.tolerances = {k: float(v) for k, v in tols.items()}
        if obj.get("epsilon") is not None:
            scen.epsilon = float(obj["epsilon"])
        if obj.get("seed") is not None:
            scen.seed = int(obj["seed"])
        if obj.get("ideal") is not None:
            scen.ideal = ZeroIdeal.from_json(obj["ideal"])
    except ParseError:
        raise
    except (TypeError, ValueError, KeyError, CoronaLabError) as exc:
        raise ParseError(f"invalid scenario value: {exc}")

    if kind != "check-bounds":
        scen.tuple_spec = _require(obj, "tuple")
        if not isinstance(scen.tuple_spec, dict) or not (
                "entries" in scen.tuple_spec or "random" in scen.tuple_spec):
            raise ParseError("tuple needs 'entries' or 'random'", field="tuple")
        if "random" in scen.tuple_spec:
            if "seed" not in scen.tuple_spec["random"] and scen.seed is None:
                raise ParseError("random generation needs a seed", field="tuple.random.seed")
    else:
        scen.tuple_spec = obj.get("tuple")
    if kind in ("verify-lemma22", "solve-corona", "solve-ideal", "solve-wolff"):
        if scen.ideal is None:
            raise ParseError("missing required field", field="ideal")
    if kind in ("solve-ideal", "solve-wolff"):
        scen.h_spec = _require(obj, "h")
    else:
        scen.h_spec = obj.get("h")
    return scen


def load_scenario(path):
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", line=exc.lineno)
    return parse_scenario(obj)


@dataclass
class VerificationReport:
    scenario: dict
    checks: list
    solutions: dict
    seed: int
    wall_ms: float = 0.0

    @property
    def passed(self):
        return bool(self.checks) and all(c["pass"] for c in self.checks)

    def to_json(self):
        return {"schema_version": SCHEMA_VERSION, "scenario": self.scenario,
                "checks": self.checks, "solutions": self.solutions,
                "seed": self.seed, "wall_ms": self.wall_ms}

    def dumps(self):
        return json.dumps(self.to_json(), indent=1)


def _check(name, value, bound):
    value = float(value)
    bound = float(bound)
    return {"name": name, "value": value, "bound": bound,
            "pass": bool(math.isfinite(value) and value <= bound)}


def _seed(scen, spec=None):
    if spec and "seed" in spec:
        return int(spec["seed"])
    return 0 if scen.seed is None else scen.seed


def _random_vector(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def identity_suite(trials=200, n_min=2, n_max=12, seed=0, tol=None):
    """Randomised checks of the kernel-matrix identities; returns check records."""
    tol = tol or (lambda name: DEFAULT_TOLERANCES[name] * tol_scale())
    rng = np.random.default_rng(seed)
    worst = dict.fromkeys(["self", "pair", "kernel", "rank", "sv", "norm"], 0.0)
    for _ in range(trials):
        n = int(rng.integers(n_min, n_max + 1))
        a = _random_vector(rng, n)
        d = _random_vector(rng, n)
        na, nd = np.linalg.norm(a), np.linalg.norm(d)
        worst["self"] = max(worst["self"], kernel.q_identity_self(a) / (1 + na ** 2))
        worst["pair"] = max(worst["pair"], kernel.q_identity_pair(a, d) / (1 + na * nd))
        prod, rank = kernel.q_kernel_check(a)
        worst["kernel"] = max(worst["kernel"], prod / na ** 2)
        worst["rank"] = max(worst["rank"], abs(rank - (n - 1)))
        sv = np.zeros(n)
        s = np.linalg.svd(kernel.build_q(a).dense(), compute_uv=False)
        sv[:s.size] = s
        expected = np.r_[np.full(n - 1, na), 0.0]
        worst["sv"] = max(worst["sv"], float(np.abs(np.sort(sv)[::-1] - expected).max()))
        worst["norm"] = max(worst["norm"], abs(kernel.q_norm(a) - na))
    return [
        _check("q_identity_self/(1+|a|^2)", worst["self"], tol("identity_self")),
        _check("q_identity_pair/(1+|a||d|)", worst["pair"], tol("identity_pair")),
        _check("|A Q_A|/|a|^2", worst["kernel"], tol("kernel_product")),
        _check("|rank Q_A - (n-1)|", worst["rank"], 0),
        _check("singular_values", worst["sv"], tol("singular_values")),
        _check("|q_norm - |a||", worst["norm"], tol("q_norm")),
    ]


def _build_tuple(scen):
    spec = scen.tuple_spec
    if "entries" in spec:
        F = FnTuple.from_json(spec, scen.margin)
        return SubalgebraTuple.from_tuple(F, scen.ideal) if scen.ideal is not None else F
    rnd = spec["random"]
    rng = instance_rng(_seed(scen, rnd), 0)
    params = CorpusParams(margin=scen.margin)
    F, _ = draw_instance(rng, params, ideal=scen.ideal, n=int(_require(rnd, "n", "tuple.random")),
                         max_degree=int(rnd.get("max_degree", 4)))
    return F


def _build_h(scen, F):
    spec = scen.h_spec
    if isinstance(spec, dict) and "random" in spec:
        rnd = spec["random"]
        rng = np.random.default_rng([_seed(scen, rnd), 1])
        w = random_weights(rng, len(F), int(rnd.get("max_degree", 2)), F.ideal)
        h = Poly()
        for wj, fj in zip(w, F.tuple):
            h = h + wj * fj
        return h
    return fn_from_json(spec, scen.margin)


def _transfer_checks(scen, F, G, res, residual_tol, constant_tol, rng, corona):
    checks = [
        _check("residual_sup", res.residual_sup, residual_tol * res.residual_scale),
        _check("membership_max", res.membership_max,
               scen.tol("membership") * res.membership_tol),
        _check("constant_part_error", res.constant_error, constant_tol),
        _check("norm_sampled", res.norm_sampled, res.norm_bound_rhs + scen.tol("norm_slack")),
    ]
    pts = norms.random_disk_points(rng, EQ4_POINTS)
    x = np.conj(F.constant_part) / F.fc_norm ** 2
    orth = max(transfer.correction_orthogonality(F.tuple, G, x, z) /
               (1 + np.linalg.norm(F.tuple.values(z)) ** 2 * np.linalg.norm(G.values(z))
                * np.linalg.norm(x)) for z in pts)
    checks.append(_check("correction_orthogonality", orth, scen.tol("orthogonality")))
    if corona:
        eq4 = max(r / s for r, s in (transfer.eq4_residual(F, G, z) for z in pts))
        checks.append(_check("eq4_consistency", eq4, scen.tol("eq4")))
    return checks


def _constant(entry):
    p = poly_from_json(entry)
    if p.degree > 0:
        raise ParseError("verify-lemma21 entries must be constants", field="tuple.entries")
    return complex(p.coeffs[0]) if p.coeffs.size else 0j


def _run_lemma21(scen):
    spec = scen.tuple_spec
    if "entries" in spec:
        a = np.array([_constant(e) for e in spec["entries"]])
        checks = [_check("q_identity_self", kernel.q_identity_self(a),
                         scen.tol("identity_self") * (1 + np.linalg.norm(a) ** 2))]
        prod, rank = kernel.q_kernel_check(a)
        checks.append(_check("|A Q_A|", prod,
                             scen.tol("kernel_product") * np.linalg.norm(a) ** 2))
        checks.append(_check("|rank - (n-1)|", abs(rank - (len(a) - 1 if np.any(a) else 0)), 0))
        return checks, {"q_dense": kernel.dense_to_json(kernel.build_q(a))}
    rnd = spec["random"]
    n = int(_require(rnd, "n", "tuple.random"))
    trials = int(rnd.get("trials", 20))
    checks = identity_suite(trials, n, n, _seed(scen, rnd), scen.tol)
    return checks, {"n": n, "trials": trials}


def _run_lemma22(scen):
    F = _build_tuple(scen)
    rep = transfer.lemma22_check(F, scen.grid, scen.epsilon)
    checks = [
        _check("|FF*(z_k) - |F_c|^2|", rep.zero_deviation, scen.tol("zero_gramian")),
        _check("|F_c|^2", rep.fc_norm_sq, 1.0 + norms.COMPARE_RTOL),
        _check("sampled sup|phi_F|", rep.phi_norm.lower, 2.0 + scen.tol("phi_slack")),
    ]
    if rep.eps_sq is not None:
        checks.append(_check("eps^2 - |F_c|^2", rep.eps_sq - rep.fc_norm_sq, 0.0))
    return checks, {"lemma22": rep.to_json()}


def _run_corona(scen):
    F = _build_tuple(scen)
    cert = bezout.bezout_tuple(F.tuple)
    G = bezout.corona_bezout(F.tuple, scen.margin)
    res = transfer.transfer_corona(F, G, grid=scen.grid)
    rng = np.random.default_rng([_seed(scen), 4])
    checks = [_check("bezout_residual", cert.residual, scen.tol("bezout") * cert.scale)]
    checks += _transfer_checks(scen, F, G, res, scen.tol("corona_residual"),
                               scen.tol("corona_constant"), rng, corona=True)
    sols = {"G": [fn_to_json(g) for g in G], "transfer": res.to_json(),
            "bezout": cert.to_json(),
            "inf_gramian_grid": norms.inf_gramian(F.tuple, scen.grid)}
    if scen.epsilon is not None:
        eps_sq = scen.epsilon ** 2
        if 0 < eps_sq < math.exp(-1):
            sols["uchiyama_context"] = (1 + 1 / F.fc_norm) * norms.uchiyama_bound(eps_sq)
    return checks, sols


def _run_ideal(scen, wolff):
    F = _build_tuple(scen)
    h = _build_h(scen, F)
    rng = np.random.default_rng([_seed(scen), 4])
    if wolff:
        res = transfer.wolff_pipeline(F, h, grid=scen.grid, margin=scen.margin)
        target = Poly(h) ** 3
        G = bezout.ideal_solve(F.tuple, target, scen.margin)
    else:
        G = bezout.ideal_solve(F.tuple, h, scen.margin)
        res = transfer.transfer_ideal(F, G, h, grid=scen.grid)
    checks = _transfer_checks(scen, F, G, res, scen.tol("ideal_residual"),
                              scen.tol("ideal_constant"), rng, corona=False)
    return checks, {"h": fn_to_json(h), "G": [fn_to_json(g) for g in G],
                    "transfer": res.to_json()}


def _psi_from_spec(spec):
    spec = spec or {"kind": "iterated-log", "n": 0, "eps_exp": 1.0}
    kind = spec.get("kind", "iterated-log")
    if kind == "iterated-log":
        n, e = int(spec.get("n", 0)), float(spec.get("eps_exp", 1.0))
        return (lambda t: norms.treil_psi(t, n, e)), spec
    if kind == "power":
        p = float(spec.get("exponent", 1.0))
        return (lambda t: t ** p), spec
    raise ParseError(f"unknown psi kind {kind!r}", field="psi.kind")


def _run_bounds(scen):
    checks, sols = [], {}
    if scen.epsilon is not None:
        eps_sq = scen.epsilon ** 2
        val = norms.uchiyama_bound(eps_sq)
        sols["uchiyama_bound"] = val
        check = 9 / eps_sq * math.log(1 / eps_sq)
        checks.append(_check("uchiyama_bound_recompute", abs(val - check), 1e-12 * val))
    psi, spec = _psi_from_spec(scen.raw.get("psi"))
    t_max = float(scen.raw.get("psi_t_max", 0.5))
    integral = norms.psi_integral_check(psi, t_max=t_max)
    sols["psi"] = spec
    sols["psi_partials"] = [list(p) for p in integral.partials]
    steps = np.diff([p[1] for p in integral.partials])
    checks.append(_check("psi_partials_nondecreasing", float(max(0.0, -steps.min(initial=0.0))), 0.0))
    if scen.tuple_spec is not None and scen.h_spec is not None:
        F = FnTuple.from_json(scen.tuple_spec, scen.margin)
        h = fn_from_json(scen.h_spec, scen.margin)
        holds, witness = norms.check_treil_hypothesis(F, h, psi, scen.grid)
        sols["treil_hypothesis"] = {"holds": holds, "witness": witness}
        checks.append(_check("treil_hypothesis_violation", 0.0 if holds else 1.0, 0.0))
    return checks, sols


_RUNNERS = {
    "verify-lemma21": _run_lemma21,
    "verify-lemma22": _run_lemma22,
    "solve-corona": _run_corona,
    "solve-ideal": lambda s: _run_ideal(s, wolff=False),
    "solve-wolff": lambda s: _run_ideal(s, wolff=True),
    "check-bounds": _run_bounds,
}


def run(scen):
    """Execute a parsed scenario; module errors become a failing check."""
    start = time.perf_counter()
    try:
        checks, sols = _RUNNERS[scen.kind](scen)
    except CoronaLabError as exc:
        checks = [{"name": f"error:{type(exc).__name__}", "value": None,
                   "bound": None, "pass": False}]
        sols = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    except Exception as exc:  # noqa: BLE001 - reported, never swallowed silently
        checks = [{"name": f"error:{type(exc).__name__}", "value": None,
                   "bound": None, "pass": False}]
        sols = {"error": {"type": type(exc).__name__, "message": str(exc),
                          "traceback": traceback.format_exc(limit=3)}}
    wall = (time.perf_counter() - start) * 1e3
    return VerificationReport(scen.raw, checks, sols, _seed(scen), wall)


def run_scenario(path, out=None):
    """Load, run and (optionally) write the report for one scenario file."""
    report = run(load_scenario(path))
    if out is not None:
        out = Path(out)
        tmp = out.with_name(out.name + ".tmp")
        tmp.write_text(report.dumps() + "\n")
        os.replace(tmp, out)
    return report

