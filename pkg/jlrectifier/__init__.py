"""jlrectifier: exact arithmetic for the essentially tame Jacquet-Langlands rectifier."""

__version__ = "0.1.0"
