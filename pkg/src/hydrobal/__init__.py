"""hydrobal: well-balanced finite-volume solver for Euler flows with gravity."""

__version__ = "0.1.0"
