"""Command-line pipeline: derive-params, optimize, validate, report.

Configuration is JSON; the bundled paper-defaults.json carries the full
default parameter set so each subcommand runs without arguments.  Artifacts
are CSV time series plus JSON envelopes, all floats written with 17
significant digits so values round-trip bit-exactly.

Exit codes: 0 success, 2 configuration error, 3 optimization did not
converge, 4 input grid mismatch, 5 missing data for a report.
"""
import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .circuit import (TWO_PI, QubitDesign, CouplingDesign,
                      derive_pair_coefficients)
from .hamiltonian import ReducedModel, PulseSequence, MultiLevelModel
from .propagation import (propagate_unitary, propagate_superoperator,
                          evolve_populations, decoherence_rates_from_T1_T2,
                          COMPUTATIONAL_LABELS)
from .krotov import (OptimizationConfig, optimize_gate,
                     optimize_gate_dissipative, default_initial_guess)
from .gates import make_target, GATE_NAMES, DEFAULT_GATE_TIMES
from . import plotting

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NO_CONVERGENCE = 3
EXIT_INPUT_MISMATCH = 4
EXIT_MISSING_DATA = 5

# Reference values (GHz unless marked) the derived coefficients are
# compared against for the default circuit design.
REFERENCE_VALUES = {
    "omega1_GHz": 3.30,
    "omega2_GHz": 8.24,
    "Lambda22_GHz": 0.4,
    "kappa2_slope1_GHz": -1.02e3,
    "kappa2_slope2_GHz": -2.57e3,
    "chi1_slope_GHz": 4.4e-3,
    "Xi12_slope_GHz": 8.22e-2,
    "Theta11_slope_GHz": 1.66e-2,
}


class ConfigError(Exception):
    pass


class InputMismatchError(Exception):
    pass


class MissingDataError(Exception):
    pass


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return "%.17g" % float(x)


def _dump_json(obj, fh, indent=0):
    """JSON writer with 17-significant-digit floats (deterministic)."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            fh.write("{}")
            return
        fh.write("{\n")
        for i, (k, v) in enumerate(obj.items()):
            fh.write(pad + "  " + json.dumps(str(k)) + ": ")
            _dump_json(v, fh, indent + 1)
            fh.write(",\n" if i < len(obj) - 1 else "\n")
        fh.write(pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            fh.write("[]")
            return
        fh.write("[\n")
        for i, v in enumerate(seq):
            fh.write(pad + "  ")
            _dump_json(v, fh, indent + 1)
            fh.write(",\n" if i < len(seq) - 1 else "\n")
        fh.write(pad + "]")
    elif isinstance(obj, bool):
        fh.write("true" if obj else "false")
    elif obj is None:
        fh.write("null")
    elif isinstance(obj, (int, np.integer)):
        fh.write(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        fh.write(_fmt(float(obj)))
    else:
        fh.write(json.dumps(obj))


def write_json(path, obj):
    with open(path, "w") as fh:
        _dump_json(obj, fh)
        fh.write("\n")


def default_config_path():
    return os.path.join(os.path.dirname(__file__), "paper-defaults.json")


def load_config(path=None):
    source = path or default_config_path()
    try:
        with open(source) as fh:
            user = json.load(fh)
    except OSError as exc:
        raise ConfigError("cannot read config %s: %s" % (source, exc))
    except json.JSONDecodeError as exc:
        raise ConfigError("malformed JSON in %s: %s" % (source, exc))
    if path is None:
        cfg = user
    else:
        with open(default_config_path()) as fh:
            cfg = json.load(fh)
        _merge(cfg, user)
    _validate_config(cfg)
    return cfg


def _merge(base, over):
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(base.get(k), dict):
            _merge(base[k], v)
        else:
            base[k] = v


def _get(cfg, dotted, kind, positive=False):
    node = cfg
    for part in dotted.split("."):
        if not isinstance(node, dict) or part not in node:
            raise ConfigError("config error at %s: missing" % dotted)
        node = node[part]
    if kind is float and isinstance(node, int) and not isinstance(node, bool):
        node = float(node)
    if not isinstance(node, kind) or isinstance(node, bool) and kind is not bool:
        raise ConfigError("config error at %s: expected %s"
                          % (dotted, kind.__name__))
    if positive and node <= 0:
        raise ConfigError("config error at %s: must be positive" % dotted)
    return node


def _validate_config(cfg):
    for i in (0, 1):
        for key in ("E_J_over_h_GHz", "ej_over_ec", "alpha", "f_bias"):
            _get(cfg, "qubits", list)
            if len(cfg["qubits"]) != 2:
                raise ConfigError("config error at qubits: need exactly 2")
            if key not in cfg["qubits"][i]:
                raise ConfigError("config error at qubits[%d].%s: missing"
                                  % (i, key))
    _get(cfg, "coupling.mutual_inductance_pH", float, positive=True)
    _get(cfg, "basis.n_max", int, positive=True)
    _get(cfg, "basis.n_levels", int, positive=True)
    gates = _get(cfg, "gates", list)
    for g in gates:
        if g not in GATE_NAMES:
            raise ConfigError("config error at gates: unknown gate %r" % g)
    times = _get(cfg, "gate_times_ns", dict)
    for g in gates:
        if g not in times:
            raise ConfigError("config error at gate_times_ns.%s: missing" % g)
        if not times[g] > 0:
            raise ConfigError("config error at gate_times_ns.%s: "
                              "must be positive" % g)
    _get(cfg, "dt_ns", float, positive=True)
    _get(cfg, "optimizer.shape_over_weight_GHz_inv", float, positive=True)
    _get(cfg, "optimizer.stop_error", float, positive=True)
    _get(cfg, "optimizer.max_iterations", int, positive=True)
    _get(cfg, "optimizer.amplitude_clamp", float, positive=True)
    _get(cfg, "optimizer.guess_amplitude", float, positive=True)


def build_designs(cfg):
    designs = []
    for i in (0, 1):
        q = cfg["qubits"][i]
        designs.append(QubitDesign(index=i + 1,
                                   E_J=TWO_PI * float(q["E_J_over_h_GHz"]),
                                   ej_over_ec=float(q["ej_over_ec"]),
                                   alpha=float(q["alpha"]),
                                   f_bias=float(q["f_bias"])))
    coupling = CouplingDesign.from_mutual_inductance(
        float(cfg["coupling"]["mutual_inductance_pH"]), designs[0], designs[1])
    return designs, coupling


def optimizer_config(cfg, gate):
    opt = dict(cfg["optimizer"])
    opt.update(cfg.get("gate_overrides", {}).get(gate, {}))
    return opt, OptimizationConfig(
        shape_over_weight=float(opt["shape_over_weight_GHz_inv"]) / TWO_PI,
        stop_error=float(opt["stop_error"]),
        max_iterations=int(opt["max_iterations"]),
        dt=float(cfg["dt_ns"]),
        amplitude_clamp=float(opt["amplitude_clamp"]),
        halving_recovery=bool(opt.get("halving_recovery", False)),
    )


def job_pool_size(n_jobs):
    cap = os.environ.get("FLUXGATE_THREADS")
    if cap is not None:
        try:
            cap = int(cap)
        except ValueError:
            raise ConfigError("FLUXGATE_THREADS must be an integer")
        if cap < 1:
            raise ConfigError("FLUXGATE_THREADS must be >= 1")
        return min(n_jobs, cap)
    return min(n_jobs, os.cpu_count() or 1)


def write_pulse_files(out, name, pulses, meta):
    csv_path = os.path.join(out, "pulses_%s.csv" % name)
    with open(csv_path, "w") as fh:
        fh.write("t_ns,fc1,fc2\n")
        for j in range(pulses.n_steps):
            fh.write("%s,%s,%s\n" % (_fmt(j * pulses.dt),
                                     _fmt(pulses.fc1[j]),
                                     _fmt(pulses.fc2[j])))
    envelope = {"dt": pulses.dt, "n_steps": pulses.n_steps,
                "pulse_csv": os.path.basename(csv_path)}
    envelope.update(meta)
    write_json(os.path.join(out, "pulses_%s.json" % name), envelope)
    return csv_path


def read_pulse_file(csv_path):
    try:
        data = np.loadtxt(csv_path, delimiter=",", skiprows=1, ndmin=2)
    except OSError as exc:
        raise MissingDataError("cannot read pulse file %s: %s"
                               % (csv_path, exc))
    if data.shape[1] != 3:
        raise InputMismatchError("pulse file %s: expected 3 columns"
                                 % csv_path)
    t = data[:, 0]
    if len(t) < 2:
        raise InputMismatchError("pulse file %s: need at least 2 samples"
                                 % csv_path)
    dt = t[1] - t[0]
    if not np.allclose(np.diff(t), dt, rtol=0, atol=1e-12):
        raise InputMismatchError("pulse file %s: non-uniform time grid"
                                 % csv_path)
    return PulseSequence(dt=float(dt), fc1=data[:, 1].copy(),
                         fc2=data[:, 2].copy())


def write_history(out, name, iterations):
    """One CSV row per performed iteration; the pre-sweep point stays
    internal so a one-iteration run emits exactly one row."""
    path = os.path.join(out, "history_%s.csv" % name)
    with open(path, "w") as fh:
        fh.write("iteration,eta,J\n")
        for row in iterations:
            if int(row[0]) == 0:
                continue
            fh.write("%d,%s,%s\n" % (int(row[0]), _fmt(row[1]), _fmt(row[2])))
    return path


def read_history(path):
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def _gate_list(cfg, args):
    if getattr(args, "gate", None):
        if args.gate not in GATE_NAMES:
            raise ConfigError("unknown gate %r" % args.gate)
        return [args.gate]
    return list(cfg["gates"])


def _gate_time(cfg, args, gate):
    if getattr(args, "T", None) is not None:
        if args.T <= 0:
            raise ConfigError("--T must be positive")
        return float(args.T)
    times = cfg["gate_times_ns"]
    return float(times.get(gate, DEFAULT_GATE_TIMES[gate]))


def _apply_flag_overrides(cfg, args):
    if getattr(args, "dt", None) is not None:
        if args.dt <= 0:
            raise ConfigError("--dt must be positive")
        cfg["dt_ns"] = float(args.dt)
    if getattr(args, "max_iterations", None) is not None:
        if args.max_iterations < 1:
            raise ConfigError("--max-iterations must be >= 1")
        cfg["optimizer"]["max_iterations"] = int(args.max_iterations)
    if getattr(args, "seed", None) is not None:
        cfg["seed"] = int(args.seed)
    if getattr(args, "T", None) is not None and not getattr(args, "gate", None):
        raise ConfigError("--T requires --gate")


def cmd_derive_params(args):
    cfg = load_config(args.config)
    _apply_flag_overrides(cfg, args)
    out = args.out or cfg.get("output_dir", ".")
    os.makedirs(out, exist_ok=True)
    n_max = args.n_max or int(cfg["basis"]["n_max"])
    designs, coupling = build_designs(cfg)
    import time
    t0 = time.time()
    coeffs, sols, elems = derive_pair_coefficients(
        designs[0], designs[1], coupling, n_max=n_max,
        n_levels=int(cfg["basis"]["n_levels"]))
    elapsed = time.time() - t0
    derived = {
        "omega1_GHz": coeffs.omega[0] / TWO_PI,
        "omega2_GHz": coeffs.omega[1] / TWO_PI,
        "Lambda22_GHz": coeffs.Lambda[1, 1] / TWO_PI,
        "kappa2_slope1_GHz": coeffs.kappa2_slope[0] / TWO_PI,
        "kappa2_slope2_GHz": coeffs.kappa2_slope[1] / TWO_PI,
        "chi1_slope_GHz": coeffs.chi1_slope[0] / TWO_PI,
        "Xi12_slope_GHz": coeffs.Xi_slope[0][0][1] / TWO_PI,
        "Theta11_slope_GHz": coeffs.Theta_slope[0, 0] / TWO_PI,
    }
    comparison = []
    for key, ref in REFERENCE_VALUES.items():
        val = derived[key]
        comparison.append({"name": key, "derived": val, "reference": ref,
                           "relative_deviation": abs(val - ref) / abs(ref)})
    doc = {"n_max": n_max, "elapsed_s": elapsed,
           "coefficients": coeffs.to_dict(), "comparison": comparison}
    path = os.path.join(out, "coefficients.json")
    write_json(path, doc)
    print("wrote %s (%.1f s)" % (path, elapsed))
    for row in comparison:
        print("  %-18s derived %.6g  reference %.6g  deviation %.3g%%"
              % (row["name"], row["derived"], row["reference"],
                 100 * row["relative_deviation"]))
    return EXIT_OK


def build_guess(coeffs, gate, T, dt, opt_raw, seed):
    """Initial pulse guess for one gate from the raw optimizer settings."""
    return default_initial_guess(
        coeffs.omega, T, dt,
        amplitude=float(opt_raw["guess_amplitude"]),
        seed=seed,
        perturbation=float(opt_raw.get("guess_perturbation", 0.0)))


def _optimize_one(payload):
    """Worker for one gate; importable at module scope for process pools."""
    cfg, gate, T, out = payload
    designs, coupling = build_designs(cfg)
    coeffs, sols, elems = derive_pair_coefficients(
        designs[0], designs[1], coupling, n_max=int(cfg["basis"]["n_max"]),
        n_levels=int(cfg["basis"]["n_levels"]))
    model = ReducedModel(coeffs)
    target = make_target(gate)
    opt_raw, opt = optimizer_config(cfg, gate)
    seed = int(cfg.get("seed", 0))
    guess = build_guess(coeffs, gate, T, opt.dt, opt_raw, seed)
    run = optimize_gate(model, target, opt, guess)
    meta = {"gate": gate, "gate_time_ns": T, "converged": run.converged,
            "eta": run.final_eta, "iterations": int(run.iterations[-1, 0]),
            "termination_reason": run.termination_reason,
            "seed": seed, "stage": "unitary"}
    write_pulse_files(out, gate, run.final_pulses, meta)
    write_history(out, gate, run.iterations)
    results = {"gate": gate, "converged": run.converged,
               "eta": run.final_eta}
    deco = cfg.get("decoherence") or {}
    if deco.get("optimize") and run.converged:
        rates = decoherence_rates_from_T1_T2(float(deco["T1_us"]),
                                             float(deco["T2_us"]))
        d_opt = OptimizationConfig(
            shape_over_weight=opt.shape_over_weight,
            stop_error=float(opt_raw.get("dissipative_stop_error", 1e-5)),
            max_iterations=int(opt_raw.get("dissipative_max_iterations",
                                           2000)),
            dt=opt.dt, amplitude_clamp=opt.amplitude_clamp,
            halving_recovery=opt.halving_recovery)
        d_run = optimize_gate_dissipative(model, target, rates, d_opt,
                                          run.final_pulses)
        d_meta = {"gate": gate, "gate_time_ns": T,
                  "converged": d_run.converged, "eta_D": d_run.final_eta,
                  "iterations": int(d_run.iterations[-1, 0]),
                  "termination_reason": d_run.termination_reason,
                  "seed": seed, "stage": "dissipative"}
        write_pulse_files(out, gate + "_dissipative", d_run.final_pulses,
                          d_meta)
        write_history(out, gate + "_dissipative", d_run.iterations)
        results["eta_D"] = d_run.final_eta
        results["converged_dissipative"] = d_run.converged
    return results


def cmd_optimize(args):
    cfg = load_config(args.config)
    _apply_flag_overrides(cfg, args)
    out = args.out or cfg.get("output_dir", ".")
    os.makedirs(out, exist_ok=True)
    gates = _gate_list(cfg, args)
    payloads = [(cfg, g, _gate_time(cfg, args, g), out) for g in gates]
    workers = job_pool_size(len(payloads))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_optimize_one, payloads))
    else:
        results = [_optimize_one(p) for p in payloads]
    ok = True
    for res in results:
        line = "%s: eta %.3e %s" % (res["gate"], res["eta"],
                                    "converged" if res["converged"]
                                    else "NOT CONVERGED")
        if "eta_D" in res:
            line += ", dissipative eta_D %.3e %s" % (
                res["eta_D"], "converged" if res["converged_dissipative"]
                else "NOT CONVERGED")
        print(line)
        ok = ok and res["converged"] and res.get("converged_dissipative",
                                                 True)
    return EXIT_OK if ok else EXIT_NO_CONVERGENCE


def cmd_validate(args):
    cfg = load_config(args.config)
    _apply_flag_overrides(cfg, args)
    out = args.out or cfg.get("output_dir", ".")
    os.makedirs(out, exist_ok=True)
    gate = args.gate
    if not gate:
        raise ConfigError("validate requires --gate")
    if gate not in GATE_NAMES:
        raise ConfigError("unknown gate %r" % gate)
    pulse_path = args.pulses or os.path.join(out, "pulses_%s.csv" % gate)
    if not os.path.exists(pulse_path):
        raise MissingDataError("pulse file %s not found; run optimize first"
                               % pulse_path)
    pulses = read_pulse_file(pulse_path)
    if abs(pulses.dt - float(cfg["dt_ns"])) > 1e-12:
        raise InputMismatchError(
            "pulse grid dt %.17g does not match configured dt %.17g"
            % (pulses.dt, float(cfg["dt_ns"])))
    designs, coupling = build_designs(cfg)
    coeffs, sols, elems = derive_pair_coefficients(
        designs[0], designs[1], coupling, n_max=int(cfg["basis"]["n_max"]),
        n_levels=int(cfg["basis"]["n_levels"]))
    model = ReducedModel(coeffs)
    target = make_target(gate)
    traj = propagate_unitary(model, pulses)
    from .gates import projected_error_eta_p, SubspaceProjector
    diff = target.matrix - traj.final
    eta = float(np.trace(diff.conj().T @ diff).real / 8.0)
    ml = MultiLevelModel(elems, energies=[s.energies for s in sols],
                         coupling=coupling, designs=designs,
                         n_levels=int(cfg["basis"]["n_levels"]))
    ml_traj = propagate_unitary(ml, pulses)
    eta_P = projected_error_eta_p(ml_traj.final, target)
    doc = {"gate": gate, "gate_time_ns": pulses.T, "eta": eta,
           "eta_P": eta_P, "eta_D": None, "pulse_file": pulse_path}
    deco = cfg.get("decoherence") or {}
    if deco.get("T1_us") and deco.get("T2_us"):
        rates = decoherence_rates_from_T1_T2(float(deco["T1_us"]),
                                             float(deco["T2_us"]))
        d_path = os.path.join(out, "pulses_%s_dissipative.csv" % gate)
        d_pulses = pulses
        if os.path.exists(d_path):
            d_pulses = read_pulse_file(d_path)
            doc["dissipative_pulse_file"] = d_path
        sup = propagate_superoperator(model, d_pulses, rates)
        from .gates import dissipative_error_eta_d
        doc["eta_D"] = dissipative_error_eta_d(sup.final, target)
    trace_files = {}
    endpoints = {}
    for label in COMPUTATIONAL_LABELS:
        times, traces = evolve_populations(ml, pulses, label)
        path = os.path.join(out, "traces_%s_%s.csv" % (gate, label))
        with open(path, "w") as fh:
            fh.write("t_ns,P_gg,P_ge,P_eg,P_ee,P_leak\n")
            for j in range(len(times)):
                fh.write(",".join(_fmt(v) for v in
                                  [times[j]] + list(traces[j])) + "\n")
        trace_files[label] = os.path.basename(path)
        endpoints[label] = {lab: float(traces[-1, k]) for k, lab in
                            enumerate(["P_gg", "P_ge", "P_eg", "P_ee",
                                       "P_leak"])}
    doc["trace_files"] = trace_files
    doc["final_populations"] = endpoints
    path = os.path.join(out, "validation_%s.json" % gate)
    write_json(path, doc)
    print("%s: eta %.3e, eta_P %.3e, eta_D %s"
          % (gate, eta, eta_P,
             "%.3e" % doc["eta_D"] if doc["eta_D"] is not None else "n/a"))
    return EXIT_OK


def cmd_report(args):
    cfg = load_config(args.config)
    out = args.out or cfg.get("output_dir", ".")
    rows = []
    for gate in GATE_NAMES:
        vpath = os.path.join(out, "validation_%s.json" % gate)
        ppath = os.path.join(out, "pulses_%s.json" % gate)
        if not (os.path.exists(vpath) or os.path.exists(ppath)):
            continue
        row = {"gate": gate, "gate_time_ns": None, "eta": None,
               "eta_P": None, "eta_D": None}
        if os.path.exists(ppath):
            with open(ppath) as fh:
                env = json.load(fh)
            row["gate_time_ns"] = env.get("gate_time_ns")
            row["eta"] = env.get("eta")
        if os.path.exists(vpath):
            with open(vpath) as fh:
                val = json.load(fh)
            row["gate_time_ns"] = val.get("gate_time_ns",
                                          row["gate_time_ns"])
            row["eta"] = val.get("eta", row["eta"])
            row["eta_P"] = val.get("eta_P")
            row["eta_D"] = val.get("eta_D")
        rows.append(row)
    if not rows:
        raise MissingDataError("no completed runs found in %s" % out)
    write_json(os.path.join(out, "report.json"), rows)
    with open(os.path.join(out, "report.csv"), "w") as fh:
        fh.write("gate,gate_time_ns,eta,eta_P,eta_D\n")
        for row in rows:
            cells = [row["gate"]] + [
                "" if row[k] is None else _fmt(row[k])
                for k in ("gate_time_ns", "eta", "eta_P", "eta_D")]
            fh.write(",".join(cells) + "\n")
    for row in rows:
        gate = row["gate"]
        csv_path = os.path.join(out, "pulses_%s.csv" % gate)
        if os.path.exists(csv_path):
            pulses = read_pulse_file(csv_path)
            plotting.plot_pulses(pulses, gate,
                                 os.path.join(out,
                                              "fig_pulses_%s.png" % gate))
        hist_path = os.path.join(out, "history_%s.csv" % gate)
        if os.path.exists(hist_path):
            plotting.plot_convergence(read_history(hist_path), gate,
                                      os.path.join(
                                          out,
                                          "fig_convergence_%s.png" % gate))
        trace_sets = {}
        for label in COMPUTATIONAL_LABELS:
            tpath = os.path.join(out, "traces_%s_%s.csv" % (gate, label))
            if os.path.exists(tpath):
                data = np.loadtxt(tpath, delimiter=",", skiprows=1, ndmin=2)
                trace_sets[label] = (data[:, 0], data[:, 1:])
        if trace_sets:
            plotting.plot_population_traces(
                trace_sets, gate,
                os.path.join(out, "fig_traces_%s.png" % gate))
    print("report written to %s (%d gates)" % (out, len(rows)))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fluxgate",
        description="Flux-qubit gate pulse synthesis and validation")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config overlaying the "
                                        "bundled defaults")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int, help="guess-perturbation seed")

    p = sub.add_parser("derive-params",
                       help="derive two-level coefficients from the "
                            "circuit design")
    common(p)
    p.add_argument("--n-max", type=int, help="plane-wave cutoff")
    p.set_defaults(func=cmd_derive_params)

    p = sub.add_parser("optimize", help="synthesize gate pulses")
    common(p)
    p.add_argument("--gate", help="single gate (default: all configured)")
    p.add_argument("--T", type=float, help="gate time in ns "
                                           "(requires --gate)")
    p.add_argument("--dt", type=float, help="time step in ns")
    p.add_argument("--max-iterations", type=int)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("validate",
                       help="apply pulses to the multi-level and "
                            "dissipative models")
    common(p)
    p.add_argument("--gate", required=True)
    p.add_argument("--pulses", help="pulse CSV (default: from --out)")
    p.add_argument("--dt", type=float, help="time step in ns")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("report",
                       help="consolidate runs into a table and figures")
    common(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    except InputMismatchError as exc:
        print("input mismatch: %s" % exc, file=sys.stderr)
        return EXIT_INPUT_MISMATCH
    except MissingDataError as exc:
        print("missing data: %s" % exc, file=sys.stderr)
        return EXIT_MISSING_DATA


if __name__ == "__main__":
    sys.exit(main())
