"""Secant variety dimensions of Segre-Veronese embeddings, certified by exact
rank computations of Terracini condition matrices over prime fields."""

__version__ = "0.1.0"
