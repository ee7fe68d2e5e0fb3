"""Scenario files: validation, experiment dispatch and deterministic reports.

A scenario is a JSON object::

    {
      "name": "demo",
      "seed": 0,
      "box": {"n": 1, "L": 8, "N": 512},
      "J": null,
      "family": "B",
      "p": "2 + 0.5*sin(x)", "q": "2 + 0.5*cos(x)", "s": "1 + 0.25*sin(x)",
      "weights": null,
      "phi": {"tau": 0.1},
      "experiments": [{"type": "norm", "f": "exp(-x^2)"}]
    }

``weights`` may replace ``s`` by one expression in ``j`` and the space
variables.  ``phi`` is ``{"tau": t}`` for ``|Q|^t`` or ``{"expr": ...}`` in
the cube centre ``x`` (``y``) and side ``r``.  Every expression, every
supplied threshold and every experiment option is checked before any
computation; a failed precondition raises :class:`ScenarioError` naming it.
"""
from __future__ import annotations

import copy
import csv
import datetime as _dt
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

import numpy as np

from ..atoms import (extract_coefficients, local_means_atom, make_smooth_atom,
                     sequence_norm, synthesis_experiment, synthesize, validate_nonsmooth_atom,
                     multiplier_test)
from ..exponents import (ExponentError, VariableExponent, check_log_holder_global,
                         check_log_holder_local)
from ..grid import Box, GridError, make_grid_function
from ..kernels import (default_levels, make_admissible_pair, make_local_means,
                       make_shifted_pair)
from ..mixed import DyadicCube, SetFunction, check_set_function_class, default_cube_range
from ..spaces import (SpaceParams, ThresholdError, canonical_family, discrete_conv_ratio,
                      equivalence_experiment, eta_conv_ratio, space_norm, space_norm_variants,
                      thresholds)
from ..weights import make_weight_sequence, make_weight_sequence_from_smoothness
from .expression import Expression, ExpressionError, parse_expression

__all__ = ["ScenarioError", "Scenario", "load_scenario", "run_scenario", "report_json",
           "strip_timestamp", "EXPERIMENTS"]


class ScenarioError(ValueError):
    """A scenario precondition failed before any computation."""


def _space_vars(n: int) -> tuple[str, ...]:
    return ("x", "y", "r") if n == 2 else ("x", "r")


def _parse(text: str, where: str, variables) -> Expression:
    if not isinstance(text, str):
        raise ScenarioError(f"{where}: expected an expression string, got {text!r}")
    try:
        return parse_expression(text, variables)
    except ExpressionError as err:
        raise ScenarioError(f"{where}: {err}") from err


@dataclass
class ScenarioPreset:
    """Builds :class:`SpaceParams` from parsed expressions on any box."""

    p: Expression
    q: Expression
    s: Expression | None
    weights: Expression | None
    phi: dict
    family: str

    def _phi(self, n: int) -> SetFunction:
        if "tau" in self.phi:
            return SetFunction.cube_power(float(self.phi["tau"]), n)
        expr: Expression = self.phi["parsed"]

        def ev(x, r):
            env = {"x": x[:, 0], "r": r}
            if n == 2:
                env["y"] = x[:, 1]
            return np.broadcast_to(expr.evaluate(**{k: v for k, v in env.items()
                                                    if k in expr.free_names}), r.shape)
        return SetFunction(ev, name=str(expr))

    def build(self, box: Box, J: int | None = None, cube_plan=None, seed: int = 0) -> SpaceParams:
        J = default_levels(box) if J is None else J
        cube_plan = default_cube_range(box) if cube_plan is None else tuple(cube_plan)
        p = VariableExponent.from_function(self.p.as_field(), box)
        q = VariableExponent.from_function(self.q.as_field(), box)
        if self.weights is not None:
            expr = self.weights

            def fn(j, *coords):
                env = {"j": float(j), "x": coords[0],
                       "r": np.sqrt(sum(np.asarray(c) ** 2 for c in coords))}
                if len(coords) > 1:
                    env["y"] = coords[1]
                return expr.evaluate(**{k: v for k, v in env.items() if k in expr.free_names})
            w = make_weight_sequence(fn, box, J, seed=seed)
        else:
            w = make_weight_sequence_from_smoothness(make_grid_function(self.s.as_field(), box),
                                                     J, seed=seed)
        return SpaceParams(box, p, q, w, self._phi(box.n), J, cube_plan, self.family)


@dataclass
class Scenario:
    name: str
    seed: int
    box: Box
    J: int | None
    preset: ScenarioPreset
    experiments: list[dict]
    raw: dict

    def params(self) -> SpaceParams:
        return self.preset.build(self.box, self.J, seed=self.seed)


_DEFAULTS = {"name": "scenario", "seed": 0, "box": {"n": 1, "L": 8.0, "N": 512}, "J": None,
             "family": "B", "p": "2", "q": "2", "s": "0", "weights": None,
             "phi": {"tau": 0.0}, "experiments": []}


def load_scenario(data: dict | str | Path) -> Scenario:
    """Parse and validate a scenario (dict, JSON text or path)."""
    if isinstance(data, Path) or (isinstance(data, str) and not data.lstrip().startswith("{")):
        data = json.loads(Path(data).read_text())
    elif isinstance(data, str):
        data = json.loads(data)
    unknown = set(data) - set(_DEFAULTS)
    if unknown:
        raise ScenarioError(f"unknown scenario keys {sorted(unknown)}")
    raw = copy.deepcopy(_DEFAULTS)
    raw.update(copy.deepcopy(data))
    b = raw["box"]
    try:
        box = Box(int(b.get("n", 1)), float(b.get("L", 8.0)), int(b.get("N", 512)))
    except (GridError, TypeError, ValueError) as err:
        raise ScenarioError(f"box: {err}") from err
    if box.n not in (1, 2):
        raise ScenarioError("box: only n = 1 and n = 2 are supported")
    if raw["family"] not in ("B", "F"):
        raise ScenarioError(f"family must be 'B' or 'F', got {raw['family']!r}")
    sv = _space_vars(box.n)
    p = _parse(raw["p"], "p", sv)
    q = _parse(raw["q"], "q", sv)
    weights = _parse(raw["weights"], "weights", ("j",) + sv) if raw["weights"] else None
    s = None if weights is not None else _parse(raw["s"], "s", sv)
    phi = dict(raw["phi"])
    if ("tau" in phi) == ("expr" in phi):
        raise ScenarioError("phi: give exactly one of 'tau' or 'expr'")
    if "expr" in phi:
        phi["parsed"] = _parse(phi["expr"], "phi", sv)
    preset = ScenarioPreset(p, q, s, weights, phi, raw["family"])
    exps = raw["experiments"]
    if not isinstance(exps, list):
        raise ScenarioError("experiments must be a list")
    for i, e in enumerate(exps):
        if not isinstance(e, dict) or e.get("type") not in EXPERIMENTS:
            raise ScenarioError(f"experiment {i}: unknown type {e!r}; "
                                f"choose from {sorted(EXPERIMENTS)}")
    J = raw["J"]
    sc = Scenario(str(raw["name"]), int(raw["seed"]), box, None if J is None else int(J),
                  preset, exps, raw)
    _validate(sc)
    return sc


# pairs ---------------------------------------------------------------------

def _pair_factory(spec: dict) -> Callable[[Box], Any]:
    kind = spec.get("pair", "admissible")
    if kind == "admissible":
        return make_admissible_pair
    if kind == "shifted":
        shift = spec.get("shift", 0.3)
        return lambda box: make_shifted_pair(box, shift)
    if kind == "local-means":
        d, N = float(spec.get("d", 3.0)), int(spec.get("N", 2))
        return lambda box: make_local_means(d, N, box, min_samples=int(spec.get("min_samples", 32)))
    raise ScenarioError(f"unknown kernel pair {kind!r}")


# validation ------------------------------------------------------------------

def _need(name: str, bound: float, value, condition: str, where: str) -> None:
    if value is None:
        raise ScenarioError(f"{where}: {name} is required ({condition}, bound {bound:.6g})")
    if not float(value) > bound:
        raise ScenarioError(f"{where}: {name} = {value} violates {condition} "
                            f"(computed bound {bound:.6g})")


def _validate(sc: Scenario) -> None:
    try:
        params = sc.params()
    except (ExponentError, GridError, ValueError) as err:
        raise ScenarioError(f"parameters: {err}") from err
    th = thresholds(params)
    sv = _space_vars(sc.box.n)
    for i, e in enumerate(sc.experiments):
        where = f"experiment {i} ({e['type']})"
        t = e["type"]
        for key in ("f", "expr", "phim"):
            if key in e:
                _parse(e[key], f"{where}.{key}", sv)
        if t == "norm" and e.get("variant", "convolution") == "peetre":
            cond = ("Peetre-maximal characterization bound a > n/p- + c_log(1/q) + alpha + "
                    "max{0, log2 c1~(phi)}" if params.family == "B" else
                    "Peetre-maximal characterization bound a > n/min{p-, q-} + alpha + "
                    "max{0, log2 c1~(phi)}")
            _need("a", th["peetre_a"], e.get("a"), cond, where)
        if t == "eta":
            _need("R", th["eta_R"], e.get("R"), "eta-convolution bound R > n + "
                  + ("c_log(1/q) + " if params.family == "B" else "")
                  + "max{0, log2 c1~(phi)}", where)
        if t == "discrete":
            _need("D1", 0.0, e.get("D1"), "D1 > 0", where)
            _need("D2", th["discrete_D2"], e.get("D2"), "D2 > max{0, log2 c1~(phi)}", where)
        if t == "atoms" and e.get("mode", "validate") == "synthesize":
            _need("K", th["atom_K"], e.get("K"), "K > alpha2 + max{0, log2 c1~(phi)}", where)
            _need("L", th["atom_L"], e.get("L"), "L > n/min{1, p-(, q-)} - n - alpha1", where)
        if t == "multiplier":
            _need("rho", th["multiplier_rho"], e.get("rho"),
                  "rho > max{alpha2, alpha2 + log2 c1~(phi), n/min{1,p-(,q-)} - n - alpha1}",
                  where)
        if t in ("norm", "equiv"):
            for key in ("pair", "pair_a", "pair_b"):
                if key in e:
                    _pair_factory({**e, "pair": e[key]})


# experiments --------------------------------------------------------------------

def _field(sc: Scenario, text: str, box: Box | None = None):
    return make_grid_function(parse_expression(text, _space_vars(sc.box.n)).as_field(),
                              box or sc.box)


def _exp_check_exponent(sc: Scenario, e: dict, params: SpaceParams) -> dict:
    expr = parse_expression(e["expr"], _space_vars(sc.box.n))
    vals = make_grid_function(expr.as_field(), sc.box)
    if not np.all(np.isfinite(vals.values)) and not e.get("allow_infinite", False):
        return {"expr": str(expr), "passed": False, "error": "non-finite samples"}
    try:
        p = VariableExponent(sc.box, vals.values, g_inf=e.get("g_inf"))
    except ExponentError as err:
        return {"expr": str(expr), "passed": False, "error": str(err)}
    out = {"expr": str(expr), "p_minus": p.p_minus, "p_plus": p.p_plus,
           "c_log_local": check_log_holder_local(p, seed=sc.seed)}
    if p.g_inf is not None:
        out["c_log_global"] = check_log_holder_global(p)
    inv = VariableExponent(sc.box, 1.0 / p.values)
    out["c_log_local_reciprocal"] = check_log_holder_local(inv, seed=sc.seed)
    out["passed"] = bool(np.isfinite(out["c_log_local"]) and p.p_minus > 0)
    return out


def _exp_thresholds(sc, e, params) -> dict:
    return {"thresholds": thresholds(params), "weights": list(params.w.params), "passed": True}


def _exp_norm(sc, e, params) -> dict:
    f = _field(sc, e["f"])
    pair = _pair_factory(e)(sc.box)
    variant = e.get("variant", "convolution")
    value = space_norm_variants(f, params, pair, a=e.get("a"), variant=variant,
                                check=e.get("check", True))
    return {"f": e["f"], "pair": e.get("pair", "admissible"), "variant": variant,
            "norm": value, "passed": bool(np.isfinite(value))}


def _exp_equiv(sc, e, params) -> dict:
    fam = canonical_family()
    if "count" in e:
        fam = fam[: int(e["count"])]
    rep = equivalence_experiment(sc.preset, _pair_factory({**e, "pair": e.get("pair_a", "admissible")}),
                                 _pair_factory({**e, "pair": e.get("pair_b", "local-means")}),
                                 sc.box, fam, refine=e.get("refine", True), seed=sc.seed)
    ok = rep["spread"] is not None and rep["spread"] <= e.get("max_spread", 50.0)
    if e.get("refine", True):
        ok = ok and rep["spread_change"] is not None and rep["spread_change"] < e.get("max_change", 0.2)
    rep["passed"] = bool(ok)
    return rep


def _stability(values: list[float]) -> float:
    return (max(values) - min(values)) / min(values)


def _exp_eta(sc, e, params) -> dict:
    seeds = e.get("seeds", [sc.seed, sc.seed + 1])
    runs = [eta_conv_ratio(params, float(e["R"]), int(e.get("trials", 100)), s) for s in seeds]
    maxes = [r["max_ratio"] for r in runs]
    change = _stability(maxes)
    return {"R": e["R"], "seeds": seeds, "max_ratios": maxes, "change": change,
            "passed": bool(all(np.isfinite(maxes)) and change < e.get("max_change", 0.2))}


def _exp_discrete(sc, e, params) -> dict:
    seeds = e.get("seeds", [sc.seed, sc.seed + 1])
    runs = [discrete_conv_ratio(params, float(e["D1"]), float(e["D2"]),
                                int(e.get("trials", 100)), s) for s in seeds]
    b = [r["max_ratio_B"] for r in runs]
    f = [r["max_ratio_F"] for r in runs]
    tol = e.get("max_change", 0.2)
    return {"D1": e["D1"], "D2": e["D2"], "seeds": seeds, "max_ratios_B": b, "max_ratios_F": f,
            "change_B": _stability(b), "change_F": _stability(f),
            "passed": bool(_stability(b) < tol and _stability(f) < tol)}


def _cube_list(e: dict, n: int) -> list[DyadicCube]:
    cubes = e.get("cubes", [[1, [0] * n], [2, [1] * n]])
    return [DyadicCube(int(j), tuple(int(v) for v in k)) for j, k in cubes]


def _exp_atoms(sc, e, params) -> dict:
    mode = e.get("mode", "validate")
    K, L = e.get("K", 2), e.get("L", 1)
    if mode == "validate":
        rows = []
        for i, Q in enumerate(_cube_list(e, sc.box.n)):
            a = make_smooth_atom(Q, int(K), int(L), sc.box, sc.seed + i)
            r = validate_nonsmooth_atom(a, K, L)
            r.pop("probes")
            rows.append(r)
        return {"mode": mode, "items": rows, "passed": all(r["passed"] for r in rows)}
    if mode == "synthesize":
        rep = synthesis_experiment(params, _pair_factory(e)(sc.box), int(K), int(L),
                                   levels=range(int(e.get("levels", 4)) + 1),
                                   trials=int(e.get("trials", 10)), seed=sc.seed)
        rep["passed"] = bool(np.isfinite(rep["max_ratio"]))
        return rep
    if mode == "roundtrip":
        lm = make_local_means(float(e.get("d", 3.0)), int(e.get("N", 2)), sc.box)
        f = _field(sc, e.get("f", "exp(-x^2)"))
        J = int(e.get("levels", params.J))
        t = extract_coefficients(f, lm, J)
        atoms = {Q: local_means_atom(lm, Q, K, c=1.0) for Q in t.coeffs}
        g = synthesize(t, atoms)
        pair = make_admissible_pair(sc.box)
        nf = space_norm(f, params, pair)
        defect = space_norm(g - f, params, pair)
        return {"mode": mode, "coefficients": len(t.coeffs), "norm_f": nf,
                "defect": defect, "relative_defect": defect / nf if nf else None,
                "sequence_norm": sequence_norm(t, params), "passed": True}
    raise ScenarioError(f"unknown atoms mode {mode!r}")


def _exp_multiplier(sc, e, params) -> dict:
    phim = _field(sc, e["phim"])
    pair = _pair_factory(e)(sc.box)
    fs = [e["f"]] if "f" in e else None
    rows = []
    if fs is None:
        for name, fn in canonical_family():
            r = multiplier_test(phim, float(e["rho"]), make_grid_function(fn, sc.box), params, pair)
            r["name"] = name
            rows.append(r)
    else:
        r = multiplier_test(phim, float(e["rho"]), _field(sc, fs[0]), params, pair)
        r["name"] = fs[0]
        rows.append(r)
    ratios = [r["ratio"] for r in rows if r["ratio"] is not None]
    return {"phim": e["phim"], "rho": e["rho"], "items": rows, "max_ratio": max(ratios),
            "passed": bool(np.all(np.isfinite(ratios)))}


EXPERIMENTS: dict[str, Callable] = {
    "check-exponent": _exp_check_exponent,
    "thresholds": _exp_thresholds,
    "norm": _exp_norm,
    "equiv": _exp_equiv,
    "eta": _exp_eta,
    "discrete": _exp_discrete,
    "atoms": _exp_atoms,
    "multiplier": _exp_multiplier,
}


# reports --------------------------------------------------------------------------

def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def report_json(report: dict) -> str:
    """Canonical JSON: sorted keys, fixed indentation, non-finite numbers as null."""
    return json.dumps(_clean(report), sort_keys=True, indent=1)


def _items_csv(items: list[dict]) -> str:
    keys = sorted({k for it in items for k, v in it.items() if not isinstance(v, (dict, list))})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for it in items:
        w.writerow({k: _clean(it.get(k)) for k in keys})
    return buf.getvalue()


def _plot(items: list[dict], key: str, path: Path, title: str) -> bool:
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return False
    vals = [it.get(key) for it in items if it.get(key) is not None]
    if not vals:
        return False
    fig, ax = plt.subplots(figsize=(6, 3))
    ax.plot(range(len(vals)), vals, "o-")
    ax.set_xlabel("item")
    ax.set_ylabel(key)
    ax.set_title(title)
    fig.tight_layout()
    plt.rcParams["svg.hashsalt"] = "varbesov"
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return True


def run_scenario(sc: Scenario, out_dir: str | Path | None = None, plots: bool = False) -> tuple[int, dict]:
    """Run every experiment; return ``(exit code, report)``.

    The exit code is 0 exactly when every experiment passed.  With
    ``out_dir`` the JSON report, per-experiment CSV tables of item lists
    and (with ``plots``) SVG ratio plots are written there.
    """
    params = sc.params() if sc.experiments else None
    results = []
    for i, e in enumerate(sc.experiments):
        try:
            res = EXPERIMENTS[e["type"]](sc, e, params)
        except (ThresholdError, GridError, ExponentError) as err:
            res = {"passed": False, "error": f"{type(err).__name__}: {err}"}
        results.append({"index": i, "type": e["type"], "options": e, "result": res,
                        "passed": bool(res.get("passed", False))})
    report = {
        "scenario": sc.name,
        "seed": sc.seed,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "parameters": {k: v for k, v in sc.raw.items() if k != "experiments"},
        "thresholds": thresholds(params) if params is not None else {},
        "experiments": results,
        "passed": all(r["passed"] for r in results),
    }
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{sc.name}.json").write_text(report_json(report) + "\n")
        for r in results:
            items = r["result"].get("items")
            if not items:
                continue
            stem = f"{sc.name}_{r['index']}_{r['type']}"
            (out / f"{stem}.csv").write_text(_items_csv(items))
            if plots:
                key = next((k for k in ("ratio", "regularity") if k in items[0]), None)
                if key:
                    _plot(items, key, out / f"{stem}.svg", f"{r['type']} {key}")
    return (0 if report["passed"] else 1), report


def strip_timestamp(text: str) -> str:
    """Report text with the timestamp field removed (for comparisons)."""
    data = json.loads(text)
    data.pop("timestamp", None)
    return json.dumps(data, sort_keys=True, indent=1)
