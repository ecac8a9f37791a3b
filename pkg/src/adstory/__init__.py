"""adstory: functional-unit segmentation, role labeling, storyline recovery,
and performance modeling for short video ads."""

__version__ = "0.1.0"
