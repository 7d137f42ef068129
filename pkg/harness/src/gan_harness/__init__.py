"""Paired image-to-image translation harness for banded chromosome masks.

Trains a conditional generator to translate banded segmentation masks
(codes 0/127/255) into photo-realistic grayscale chromosome images, and
bridges generated images back into the ``karyoband`` evaluator, which is
the single source of truth for all metrics.
"""

from .spec import TrainSpec

__version__ = "0.1.0"
__all__ = ["TrainSpec", "__version__"]
