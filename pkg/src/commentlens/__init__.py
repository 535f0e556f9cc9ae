"""commentlens: extract, classify and mine local source-code comments."""

__version__ = "0.1.0"
