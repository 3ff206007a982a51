"""NeSy robustness verifier: IBP through networks, interval and exact bounds through compiled circuits."""

__version__ = "0.1.0"
