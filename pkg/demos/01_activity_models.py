#!/usr/bin/env python3
"""Weighted complex-activity models: validation, completion, zone mapping.

A complex activity decomposes into weighted atomic actions on context
attributes.  The bundled fixtures describe two household routines; this
walkthrough validates them, scores partial observations, and derives a
non-overlapping zone map.
"""

from locbench.activity import (
    completion_score,
    derive_zone_map,
    is_complete,
    load_bundled_models,
    validate_activity_model,
)

models = load_bundled_models()
print(f"loaded {len(models)} bundled activity models\n")

for model in models:
    result = validate_activity_model(model)
    status = "valid" if result.ok else "INVALID"
    print(f"{model.name}: {status}")
    print(f"  threshold {model.threshold}, {model.size} elements")
    print(f"  cores {sorted(model.core_indices)}, "
          f"start {sorted(model.start_indices)}, end {sorted(model.end_indices)}")
    for i, (at, ct) in enumerate(zip(model.atomic, model.context), start=1):
        marker = "*" if i in model.core_indices else " "
        print(f"   {marker} {i}. {at.name} ({at.weight:.2f}) on {ct.name}")
    print()

breakfast, lunch = models

print("completion scoring")
print("------------------")
cores = breakfast.core_indices
print(f"{breakfast.name}, cores only {sorted(cores)}:")
print(f"  score = {completion_score(breakfast, cores):.2f}  "
      f"complete = {is_complete(breakfast, cores)}")

cores = lunch.core_indices
print(f"{lunch.name}, cores only {sorted(cores)}:")
print(f"  score = {completion_score(lunch, cores):.2f}  "
      f"complete = {is_complete(lunch, cores)}   (cores alone fall short of 0.72)")

observed = set(lunch.core_indices) | {6}
print(f"{lunch.name}, cores plus element 6:")
print(f"  score = {completion_score(lunch, observed):.2f}  "
      f"complete = {is_complete(lunch, observed)}")

print()
print("zone mapping")
print("------------")
zone_map = derive_zone_map(models, ["Cooking zone", "Dining zone"])
for activity, zone in zone_map.entries:
    print(f"  {activity} -> {zone}")
