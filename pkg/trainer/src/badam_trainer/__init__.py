"""badam-trainer: baseline-labelling network for the badam toolkit.

Interchange with the detection package is file-based only: PAGE XML
ground truth in, 16-bit PNG heatmaps plus scale sidecars out.
"""

__version__ = "0.1.0"
