"""Visualizing how confident a matching is.

After solving, rows and their matched columns are reordered by matched-pair
cost, worst first. A well-separated instance shows a dark diagonal in the
PGM render; an ambiguous one looks washed out.
"""

import tempfile
from pathlib import Path

import numpy as np

from sepmatch import (
    AudioSignal,
    SeparationInstance,
    export_confusion,
    pairwise_cost_matrix,
)

rate, n = 8000, 8000
t = np.arange(n) / rate
rng = np.random.default_rng(3)

targets = tuple(
    AudioSignal(0.8 * np.sin(2 * np.pi * f * t), rate)
    for f in (250.0, 600.0, 1100.0, 1800.0, 2600.0)
)
mixture = AudioSignal(sum(s.samples for s in targets) / 5.0, rate)

# A mediocre separator: right sources, shuffled, and each with a different
# amount of mixture bleeding through.
order = [3, 0, 4, 1, 2]
bleed = [0.45, 0.30, 0.20, 0.10, 0.03]
estimates = tuple(
    AudioSignal(
        (1.0 - b) * targets[k].samples + b * mixture.samples, rate
    )
    for k, b in zip(order, bleed)
)
instance = SeparationInstance(targets, estimates, mixture)

matrix = pairwise_cost_matrix(instance)
export = export_confusion(matrix)

print("row order (worst matched pair first):", export.row_order.tolist())
print("column order:", export.col_order.tolist())
print("reordered matrix (dB losses):")
print(np.round(export.matrix.entries, 1))
print("diagonal (matched pairs, descending):",
      np.round(np.diag(export.matrix.entries), 1))

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "confusion.pgm"
    path.write_bytes(export.to_pgm())
    print(f"\nwrote {path.stat().st_size}-byte P5 image "
          f"({export.matrix.size}x{export.matrix.size}, darkest = best match)")
