"""Rough-set feature reduction + RBF-SVM intrusion detection on KDD Cup'99 records."""

__version__ = "0.1.0"
