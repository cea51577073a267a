"""Exact hyperbolic-lattice tools: reflection groups, chambers and orbit evidence."""
__version__ = "0.1.0"
