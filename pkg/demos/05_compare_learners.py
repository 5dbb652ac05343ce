#!/usr/bin/env python3
"""All eight learner families on the same coordinate-regression task.

Within each seed every family trains and tests on identical rows, so the
comparison measures models rather than partitions.  Per-metric medians
across seeds feed the final ranking.
"""

from locbench.data import synthetic_walk_dataset
from locbench.pipelines import compare_models
from locbench.render import comparison_markdown

dataset = synthetic_walk_dataset(rows=250, noise_sigma=0.05, seed=42)
seeds = (1, 2, 3, 4, 5)
print(f"{len(dataset)} samples, seeds {seeds}: eight families, shared splits per seed\n")

result = compare_models(dataset, seeds=seeds)
print(comparison_markdown(result))

print("orderings (ascending):")
print("  by rmse_x:          " + " < ".join(result.ranking.by_rmse_x))
print("  by rmse_y:          " + " < ".join(result.ranking.by_rmse_y))
print("  by horizontal error " + " < ".join(result.ranking.by_horizontal))
print()
best = result.ranking.best["horizontal_error"]
print(f"lowest horizontal error on this walk: {best}")
