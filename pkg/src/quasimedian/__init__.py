"""Graph products, their quasi-median Cayley graphs, and the tools to check them."""

__version__ = "0.1.0"
