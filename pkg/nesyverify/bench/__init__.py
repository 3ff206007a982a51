"""Benchmarks: multi-digit addition scaling, driving constraints and the E-MAJSAT reduction check."""
from nesyverify.bench.addition import (
    BenchRow,
    bench_addition,
    bench_csv,
    max_exact_digits,
    runtime_growth,
)
from nesyverify.bench.driving import DEFAULT_EPS_GRID, DrivingRow, bench_driving, driving_csv
from nesyverify.bench.emajsat import (
    EmajsatSummary,
    emajsat_check,
    exhaustive_two_variable,
    reduction_decide,
)
from nesyverify.bench.training import train_digit_network, train_driving_networks
