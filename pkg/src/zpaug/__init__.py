"""Zero-pronoun analysis and data augmentation for Japanese-English translation corpora."""

__version__ = "0.1.0"
