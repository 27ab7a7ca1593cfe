"""Head-to-head comparison: amplitude estimation against classical sampling.

Runs the full analysis on both bundled studies with identical accuracy
targets (1% margin, 95% confidence) and reports each method's estimate,
confidence interval, and sample budget.  The quantum estimator reaches the
same target with a small fraction of the classical sample count.
"""
from gridqmc import builtin_config_path, load_config, run_analysis

for name in ("three_bus", "five_bus"):
    config = load_config(builtin_config_path(name))
    report = run_analysis(config)
    print(f"=== {name} study, line {config.analysis.line}, metric {config.analysis.metric} ===")
    print(f"exact value: {report.exact_value:.6f}")
    for method in ("iqae", "cmc"):
        res = report.results[method]
        print(
            f"  {method:4s}  estimate {res.metric_value:.6f}"
            f"  CI [{res.ci_low:.6f}, {res.ci_high:.6f}]"
            f"  samples {res.shots_total}"
            f"  covers exact: {report.coverage[method]}"
        )
    print(f"quantum/classical sample ratio: {report.sample_ratio:.3f}\n")
