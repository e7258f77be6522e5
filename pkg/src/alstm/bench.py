"""Benchmark suites: every canned experiment in both model modes, with the
published reference numbers printed next to the measured ones."""

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor

from .config import canned_config_path, load_config
from .evaluation import format_table, per_step_rmse, per_step_variance
from .pipeline import run_evaluate, run_generate, run_train

log = logging.getLogger(__name__)

SUITES = ("mackey", "lorenz", "rossler", "power")
HORIZONS = ("", "_5step", "_10step")
MODES = ("alstm", "lstm_baseline")

# Published one-step RMSE per method.
REFERENCE_ONE_STEP = {
    "mackey": {"ALSTM": 0.004778, "RBM": 0.010218, "SAE": 0.010233, "Auto-LSTM": 0.008231},
    "lorenz": {"ALSTM": 0.006752, "RBM": 0.043278, "SAE": 0.020632, "Auto-LSTM": 0.018992},
    "rossler": {"ALSTM": 0.006824, "RBM": 0.013278, "SAE": 0.010632, "Auto-LSTM": 0.012992},
    "power": {"ALSTM": 0.011562, "RBM": 0.035586, "SAE": 0.030211, "Auto-LSTM": 0.022520},
}
REFERENCE_ONE_STEP_VARIANCE = {
    "rossler": {"ALSTM": 0.010558, "RBM": 0.009832, "SAE": 0.011342, "Auto-LSTM": 0.012421},
}
# Per-step 5-step table; published under a "Variance" caption although the
# companion figure reports RMSE, so both measured metrics are shown.
REFERENCE_FIVE_STEP = {
    "mackey": {
        "ALSTM": [0.010839, 0.011292, 0.012740, 0.013451, 0.013305],
        "MSVR": [0.022342, 0.026897, 0.035123, 0.045213, 0.054234],
        "CMTL": [0.021562, 0.019023, 0.015021, 0.010228, 0.009342],
    },
    "lorenz": {
        "ALSTM": [0.011467, 0.010589, 0.012034, 0.012589, 0.014892],
        "MSVR": [0.015583, 0.018234, 0.018199, 0.019202, 0.022021],
        "CMTL": [0.014023, 0.012882, 0.010568, 0.010228, 0.011772],
    },
}
# Single ALSTM variance figures quoted for multi-step runs.
REFERENCE_MULTI_STEP_VARIANCE = {"mackey_10step": 0.011232, "rossler_multi": 0.103214}


def experiments(suite):
    names = SUITES if suite == "all" else (suite,)
    if any(n not in SUITES for n in names):
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES + ('all',)}")
    out = []
    for s in names:
        for h in HORIZONS:
            index = SUITES.index(s) * len(HORIZONS) + HORIZONS.index(h)
            out.append((s, s + h, index))
    return out


def _run_one(job):
    s, exp_name, mode, exp, out_dir = job
    stage = "generate"
    try:
        started = time.perf_counter()
        run_generate(exp, out_dir)
        stage = "train"
        model, history = run_train(exp, out_dir)
        stage = "evaluate"
        pset, rows = run_evaluate(exp, model, out_dir)
    except Exception as exc:
        raise RuntimeError(f"bench {exp_name} [{mode}] failed in stage {stage}: {exc}") from exc
    return dict(
        suite=s, name=exp_name, mode=mode, rows=rows, pset=pset, epochs=len(history),
        final_loss=history[-1], seconds=time.perf_counter() - started,
    )


def run_bench(suite, out_dir, seed=0, epochs=None, jobs=1, configs_dir=None):
    """Run a suite; writes ``bench_metrics.csv`` and ``report.txt`` under ``out_dir``."""
    jobs_list = []
    for s, exp_name, index in experiments(suite):
        path = (os.path.join(configs_dir, f"{exp_name}.cfg") if configs_dir
                else canned_config_path(exp_name))
        base = load_config(path).with_seed(seed ^ index)
        for mode in MODES:
            exp = base.with_overrides(model={"mode": mode},
                                      training={"epochs": epochs} if epochs else None)
            jobs_list.append((s, exp_name, mode, exp, os.path.join(out_dir, exp_name, mode)))
    started = time.perf_counter()
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, jobs_list))
    else:
        results = [_run_one(j) for j in jobs_list]
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "bench_metrics.csv"), "w") as fh:
        fh.write("experiment,mode,metric,step,value\n")
        for r in results:
            for metric, step, value in r["rows"]:
                fh.write(f"{r['name']},{r['mode']},{metric},{step},{value:.12g}\n")
    report = render_report(results, seed)
    footer = f"\nwall time: {time.perf_counter() - started:.1f} s\n"
    with open(os.path.join(out_dir, "report.txt"), "w") as fh:
        fh.write(report + footer)
    return results, report


def _metric(r, name, step="all"):
    return next(v for m, s, v in r["rows"] if m == name and s == step)


def render_report(results, seed):
    by = {(r["name"], r["mode"]): r for r in results}
    out = [f"A-LSTM benchmark report (seed {seed}); metrics on [0, 1]-scaled test data", ""]
    for s in dict.fromkeys(r["suite"] for r in results):
        one = (by.get((s, "alstm")), by.get((s, "lstm_baseline")))
        if all(one):
            ref = REFERENCE_ONE_STEP[s]
            header = ["", "ALSTM (measured)", "LSTM (measured)"] + [f"{k} (published)" for k in ref]
            rows = [["RMSE", _metric(one[0], "rmse"), _metric(one[1], "rmse")] + list(ref.values())]
            var_ref = REFERENCE_ONE_STEP_VARIANCE.get(s, {})
            rows.append(["Variance", _metric(one[0], "variance"), _metric(one[1], "variance")]
                        + [var_ref.get(k) for k in ref])
            out += [f"== {s}: one-step ahead ==", format_table(header, rows), ""]
        for h in ("_5step", "_10step"):
            alstm, base = by.get((s + h, "alstm")), by.get((s + h, "lstm_baseline"))
            if not (alstm and base):
                continue
            H = alstm["pset"].horizon
            ref5 = REFERENCE_FIVE_STEP.get(s) if h == "_5step" else None
            header = ["", "ALSTM rmse", "ALSTM var", "LSTM rmse", "LSTM var"]
            if ref5:
                header += [f"{k} (published)" for k in ref5]
            a_rmse, b_rmse = per_step_rmse(alstm["pset"]), per_step_rmse(base["pset"])
            a_var, b_var = per_step_variance(alstm["pset"]), per_step_variance(base["pset"])
            rows = []
            for j in range(H):
                row = [f"{j + 1} Step", float(a_rmse[j]), float(a_var[j]), float(b_rmse[j]), float(b_var[j])]
                if ref5:
                    row += [v[j] for v in ref5.values()]
                rows.append(row)
            out += [f"== {s}: {H}-step ahead ==", format_table(header, rows)]
            if ref5:
                out.append("note: the published table is captioned 'Variance' while its figure "
                           "reports RMSE; both measured metrics are listed.")
            if s + h == "mackey_10step":
                out.append(f"published ALSTM variance (10-step): {REFERENCE_MULTI_STEP_VARIANCE['mackey_10step']}")
            if s == "rossler":
                out.append(f"published ALSTM variance (multi-step): {REFERENCE_MULTI_STEP_VARIANCE['rossler_multi']}")
            out.append("")
    out.append("runs:")
    for r in results:
        out.append(f"  {r['name']:<16} {r['mode']:<14} epochs={r['epochs']:<4} "
                   f"train_loss={r['final_loss']:.3e}")
    return "\n".join(out)
