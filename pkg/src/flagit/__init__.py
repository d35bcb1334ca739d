"""Indicator mining over sentence corpora: rules, budgeted labeling, and a self-trained classifier."""

__version__ = "0.1.0"
