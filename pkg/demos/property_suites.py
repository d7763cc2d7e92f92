"""
Seeded property suites
======================

Every trial is reproducible from (seed, suite, p, index).  A small run
here; the full configuration is SuiteConfig() with 200 trials per prime.
"""

from iwasawa import SuiteConfig, run_suite
from iwasawa.harness import run_trial

cfg = SuiteConfig(primes=(2, 3), trials=10, N=30, M=48)
report = run_suite(cfg)
for line in report.summary_lines():
    print(line)
print("exit code:", report.exit_code)

# %%
# Replaying one trial gives back exactly the recorded result.
first = report.results[0]
print(first.seed, run_trial(first.suite, first.p, first.index, cfg) == first)
